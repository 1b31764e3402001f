//! Constructors for the concrete domain families: Boolean cubes, general
//! products, symmetric groups, perfect (hyper)matching schemes, and
//! multislices, together with structural membership oracles and the
//! closed-form parameter tables.

use std::collections::HashSet;

use crate::domain::{ConflictBound, Domain, DomainParams, ElemId, Point, Query, Universe};
use crate::error::{Error, Result};
use crate::numerics::rat::{rat, Rat};

/// Hard cap on enumerated points; construction refuses above it.
pub const DEFAULT_POINT_CAP: u128 = 200_000;
/// Cap on universe size (relevant for hypermatching edge sets).
pub const DEFAULT_UNIVERSE_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DomainSpec {
    /// `cube:n` — Boolean cube, shorthand for the product 2^n.
    Cube(usize),
    /// `prod:m1,...,mn` — product of alphabets of sizes m_i >= 2.
    Product(Vec<usize>),
    /// `sym:n` — the symmetric group S_n.
    SymmetricGroup(usize),
    /// `pm:n,l1,...,lm` — perfect hypermatchings P(n; lambda).
    PerfectMatching { n: usize, parts: Vec<usize> },
    /// `ms:l1,...,lm` — the multislice M(lambda).
    Multislice(Vec<usize>),
}

impl DomainSpec {
    pub fn parse(s: &str) -> Result<DomainSpec> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("domain spec `{s}` missing `:`")))?;
        let nums: Vec<usize> = rest
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad integer `{t}` in `{s}`")))
            })
            .collect::<Result<_>>()?;
        let spec = match kind {
            "cube" => {
                if nums.len() != 1 {
                    return Err(Error::InvalidInput("cube takes one parameter".into()));
                }
                DomainSpec::Cube(nums[0])
            }
            "prod" => DomainSpec::Product(nums),
            "sym" => {
                if nums.len() != 1 {
                    return Err(Error::InvalidInput("sym takes one parameter".into()));
                }
                DomainSpec::SymmetricGroup(nums[0])
            }
            "pm" => {
                if nums.len() < 2 {
                    return Err(Error::InvalidInput("pm takes n and at least one part".into()));
                }
                DomainSpec::PerfectMatching { n: nums[0], parts: nums[1..].to_vec() }
            }
            "ms" => DomainSpec::Multislice(nums),
            _ => return Err(Error::InvalidInput(format!("unknown domain kind `{kind}`"))),
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        match self {
            DomainSpec::Cube(n) => {
                if *n == 0 {
                    return Err(Error::InvalidInput("cube dimension must be positive".into()));
                }
            }
            DomainSpec::Product(ms) => {
                if ms.is_empty() || ms.iter().any(|&m| m < 2) {
                    return Err(Error::InvalidInput("product needs alphabet sizes >= 2".into()));
                }
            }
            DomainSpec::SymmetricGroup(n) => {
                if *n == 0 {
                    return Err(Error::InvalidInput("sym needs n >= 1".into()));
                }
            }
            DomainSpec::PerfectMatching { n, parts } => {
                let total: usize = parts.iter().sum();
                if *n < 2 || total < 2 || parts.iter().any(|&p| p == 0) {
                    return Err(Error::InvalidInput(
                        "pm needs n >= 2 and |lambda| >= 2 with positive parts".into(),
                    ));
                }
            }
            DomainSpec::Multislice(parts) => {
                if parts.len() < 2 || parts.iter().any(|&p| p == 0) {
                    return Err(Error::InvalidInput(
                        "ms needs at least 2 positive parts".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_string_form(&self) -> String {
        fn join(v: &[usize]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        match self {
            DomainSpec::Cube(n) => format!("cube:{n}"),
            DomainSpec::Product(ms) => format!("prod:{}", join(ms)),
            DomainSpec::SymmetricGroup(n) => format!("sym:{n}"),
            DomainSpec::PerfectMatching { n, parts } => format!("pm:{n},{}", join(parts)),
            DomainSpec::Multislice(parts) => format!("ms:{}", join(parts)),
        }
    }

    /// Number of points, if it fits in u128.
    pub fn point_count_estimate(&self) -> u128 {
        fn fact(n: usize) -> u128 {
            (1..=n as u128).product()
        }
        match self {
            DomainSpec::Cube(n) => 1u128 << (*n).min(120),
            DomainSpec::Product(ms) => ms.iter().map(|&m| m as u128).product(),
            DomainSpec::SymmetricGroup(n) => fact(*n),
            DomainSpec::PerfectMatching { n, parts } => {
                // multinomial product over parts: prod_i (lam_i n)! / (lam_i!^n n!) ... times arrangements
                // count = prod over parts of ( (lam_i*n)! / (n! * lam_i!^n) ) * n!^(m-1)
                // simpler: perfect hypermatchings = prod_i [ (lam_i n)! / (lam_i!^n n!) ] * n!^{m}/n! ... enumerate small cases instead
                let m = parts.len();
                let mut per_part: Vec<u128> = Vec::new();
                for &l in parts {
                    // ways to partition lam*n labeled vertices into n unordered groups of size lam
                    let ln = l * n;
                    per_part.push(fact(ln) / (fact(l).pow(*n as u32) * fact(*n)));
                }
                // hyperedges pair up groups across parts: n!^(m-1) ways
                per_part.iter().product::<u128>() * fact(*n).pow(m as u32 - 1)
            }
            DomainSpec::Multislice(parts) => {
                let n: usize = parts.iter().sum();
                let mut c = fact(n);
                for &p in parts {
                    c /= fact(p);
                }
                c
            }
        }
    }
}

impl std::fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_string_form())
    }
}

fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > pool.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| pool[i]).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + pool.len() - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Fully enumerate the domain for `spec`.
pub fn build(spec: &DomainSpec) -> Result<Domain> {
    build_capped(spec, DEFAULT_POINT_CAP, DEFAULT_UNIVERSE_CAP)
}

pub fn build_capped(spec: &DomainSpec, point_cap: u128, universe_cap: u128) -> Result<Domain> {
    spec.check()?;
    let est = spec.point_count_estimate();
    if est > point_cap {
        return Err(Error::ScaleCap { what: format!("building {spec}"), estimate: est, cap: point_cap });
    }
    match spec {
        DomainSpec::Cube(n) => Ok(build_product(&vec![2; *n], true)),
        DomainSpec::Product(ms) => Ok(build_product(ms, false)),
        DomainSpec::SymmetricGroup(n) => Ok(build_sym(*n)),
        DomainSpec::PerfectMatching { n, parts } => build_pm(*n, parts, universe_cap),
        DomainSpec::Multislice(parts) => Ok(build_multislice(parts)),
    }
}

fn build_product(ms: &[usize], cube_labels: bool) -> Domain {
    let n = ms.len();
    let mut labels = Vec::new();
    let mut offsets = Vec::with_capacity(n);
    for (i, &m) in ms.iter().enumerate() {
        offsets.push(labels.len() as ElemId);
        for v in 0..m {
            let shown = if cube_labels { v } else { v + 1 };
            labels.push(format!("({},{})", i + 1, shown));
        }
    }
    let universe = Universe::new(labels);
    let mut points = Vec::new();
    let mut cur = vec![0usize; n];
    'odometer: loop {
        let p: Vec<ElemId> = (0..n).map(|i| offsets[i] + cur[i] as ElemId).collect();
        points.push(Point(p));
        for i in (0..n).rev() {
            cur[i] += 1;
            if cur[i] < ms[i] {
                continue 'odometer;
            }
            cur[i] = 0;
        }
        break;
    }
    let queries: Vec<Query> = (0..n)
        .map(|i| Query((0..ms[i]).map(|v| offsets[i] + v as ElemId).collect()))
        .collect();
    let query_labels = (0..n).map(|i| format!("x{}", i + 1)).collect();
    Domain::new(universe, points, queries, query_labels, n)
}

fn build_sym(n: usize) -> Domain {
    let labels: Vec<String> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| format!("({i},{j})")))
        .collect();
    let universe = Universe::new(labels);
    let id = |i: usize, j: usize| -> ElemId { ((i - 1) * n + (j - 1)) as ElemId };
    let mut points = Vec::new();
    let mut perm: Vec<usize> = (1..=n).collect();
    loop {
        points.push(Point((1..=n).map(|i| id(i, perm[i - 1])).collect()));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let mut queries = Vec::new();
    let mut query_labels = Vec::new();
    for i in 1..=n {
        queries.push(Query((1..=n).map(|j| id(i, j)).collect()));
        query_labels.push(format!("pi({i})"));
    }
    for j in 1..=n {
        queries.push(Query((1..=n).map(|i| id(i, j)).collect()));
        query_labels.push(format!("pi^-1({j})"));
    }
    Domain::new(universe, points, queries, query_labels, n)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Vertices of P(n;lambda): part i has lambda_i * n vertices.
/// A hyperedge takes lambda_i vertices from part i, for every i.
fn build_pm(n: usize, parts: &[usize], universe_cap: u128) -> Result<Domain> {
    let m = parts.len();
    // global vertex ids, per part
    let mut vertex_count = 0usize;
    let mut part_vertices: Vec<Vec<usize>> = Vec::with_capacity(m);
    for &l in parts {
        let vs: Vec<usize> = (vertex_count..vertex_count + l * n).collect();
        vertex_count += l * n;
        part_vertices.push(vs);
    }
    let vertex_label = |v: usize| -> String {
        if m == 1 {
            format!("{}", v + 1)
        } else {
            let mut acc = v;
            for (pi, vs) in part_vertices.iter().enumerate() {
                if acc < vs.len() {
                    return format!("({},{})", pi + 1, acc + 1);
                }
                acc -= vs.len();
            }
            unreachable!()
        }
    };

    // universe = all hyperedges
    let mut universe_estimate: u128 = 1;
    for &l in parts {
        let ln = (l * n) as u128;
        let mut c: u128 = 1;
        for i in 0..l as u128 {
            c = c * (ln - i) / (i + 1);
        }
        universe_estimate *= c;
    }
    if universe_estimate > universe_cap {
        return Err(Error::ScaleCap {
            what: "hyperedge universe".into(),
            estimate: universe_estimate,
            cap: universe_cap,
        });
    }

    let mut hyperedges: Vec<Vec<usize>> = vec![Vec::new()];
    for (pi, &l) in parts.iter().enumerate() {
        let combos = combinations(&part_vertices[pi], l);
        let mut next = Vec::with_capacity(hyperedges.len() * combos.len());
        for he in &hyperedges {
            for c in &combos {
                let mut e = he.clone();
                e.extend_from_slice(c);
                next.push(e);
            }
        }
        hyperedges = next;
    }
    hyperedges.sort();
    let edge_label = |e: &[usize]| -> String {
        format!("{{{}}}", e.iter().map(|&v| vertex_label(v)).collect::<Vec<_>>().join(","))
    };
    let labels: Vec<String> = hyperedges.iter().map(|e| edge_label(e)).collect();
    let universe = Universe::new(labels);
    let edge_index: std::collections::HashMap<Vec<usize>, ElemId> = hyperedges
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i as ElemId))
        .collect();

    // enumerate perfect hypermatchings: repeatedly cover the lowest free vertex
    let mut points: Vec<Point> = Vec::new();
    let mut chosen: Vec<ElemId> = Vec::new();
    let mut free: Vec<bool> = vec![true; vertex_count];
    enumerate_matchings(
        &hyperedges,
        &edge_index,
        &mut free,
        &mut chosen,
        &mut points,
        n,
    );
    let n_points = points.len();

    let mut queries = Vec::new();
    let mut query_labels = Vec::new();
    for v in 0..vertex_count {
        let q: Vec<ElemId> = hyperedges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(&v))
            .map(|(i, _)| i as ElemId)
            .collect();
        queries.push(Query(q));
        query_labels.push(format!("edge({})", vertex_label(v)));
    }
    let d = Domain::new(universe, points, queries, query_labels, n);
    debug_assert_eq!(d.len(), n_points);
    Ok(d)
}

fn enumerate_matchings(
    hyperedges: &[Vec<usize>],
    edge_index: &std::collections::HashMap<Vec<usize>, ElemId>,
    free: &mut Vec<bool>,
    chosen: &mut Vec<ElemId>,
    out: &mut Vec<Point>,
    n: usize,
) {
    if chosen.len() == n {
        let mut p = chosen.clone();
        p.sort_unstable();
        out.push(Point(p));
        return;
    }
    let Some(first) = free.iter().position(|&f| f) else {
        return;
    };
    for (ei, e) in hyperedges.iter().enumerate() {
        // always cover the lowest free vertex: each matching appears once
        if !e.contains(&first) || e.iter().any(|&v| !free[v]) {
            continue;
        }
        for &v in e {
            free[v] = false;
        }
        chosen.push(ei as ElemId);
        enumerate_matchings(hyperedges, edge_index, free, chosen, out, n);
        chosen.pop();
        for &v in e {
            free[v] = true;
        }
    }
}

fn build_multislice(parts: &[usize]) -> Domain {
    let n: usize = parts.iter().sum();
    let m = parts.len();
    let labels: Vec<String> = (1..=n)
        .flat_map(|i| (1..=m).map(move |c| format!("({i},{c})")))
        .collect();
    let universe = Universe::new(labels);
    let id = |i: usize, c: usize| -> ElemId { ((i - 1) * m + (c - 1)) as ElemId };
    let mut points = Vec::new();
    let mut counts = vec![0usize; m];
    let mut cur = vec![0usize; n];
    fn rec(
        pos: usize,
        n: usize,
        m: usize,
        parts: &[usize],
        counts: &mut Vec<usize>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..m {
            if counts[c] < parts[c] {
                counts[c] += 1;
                cur[pos] = c;
                rec(pos + 1, n, m, parts, counts, cur, out);
                counts[c] -= 1;
            }
        }
    }
    let mut vecs = Vec::new();
    rec(0, n, m, parts, &mut counts, &mut cur, &mut vecs);
    for v in vecs {
        points.push(Point((0..n).map(|i| id(i + 1, v[i] + 1)).collect()));
    }
    let queries: Vec<Query> = (1..=n).map(|i| Query((1..=m).map(|c| id(i, c)).collect())).collect();
    let query_labels = (1..=n).map(|i| format!("x{i}")).collect();
    Domain::new(universe, points, queries, query_labels, n)
}

/// Structural membership test: is `candidate` (a set of universe element
/// ids) the indicator of a point? Never enumerates the point set.
pub fn membership(spec: &DomainSpec, d: &Domain, candidate: &[ElemId]) -> bool {
    let set: HashSet<ElemId> = candidate.iter().copied().collect();
    if set.len() != candidate.len() {
        return false;
    }
    match spec {
        DomainSpec::Cube(n) => product_membership(&vec![2; *n], d, &set),
        DomainSpec::Product(ms) => product_membership(ms, d, &set),
        DomainSpec::SymmetricGroup(n) => {
            // permutation matrix: one element per row and per column
            if set.len() != *n {
                return false;
            }
            let mut rows = vec![0usize; *n];
            let mut cols = vec![0usize; *n];
            for &e in &set {
                let e = e as usize;
                rows[e / n] += 1;
                cols[e % n] += 1;
            }
            rows.iter().all(|&c| c == 1) && cols.iter().all(|&c| c == 1)
        }
        DomainSpec::PerfectMatching { n, parts } => {
            if set.len() != *n {
                return false;
            }
            // chosen hyperedges must tile the vertex set
            let total: usize = parts.iter().map(|&l| l * n).sum();
            let mut used = vec![false; total];
            for &e in &set {
                let label = &d.universe.labels[e as usize];
                for v in parse_edge_vertices(label, parts, *n) {
                    if used[v] {
                        return false;
                    }
                    used[v] = true;
                }
            }
            used.iter().all(|&u| u)
        }
        DomainSpec::Multislice(parts) => {
            let n: usize = parts.iter().sum();
            let m = parts.len();
            if set.len() != n {
                return false;
            }
            let mut per_pos = vec![0usize; n];
            let mut per_color = vec![0usize; m];
            for &e in &set {
                let e = e as usize;
                per_pos[e / m] += 1;
                per_color[e % m] += 1;
            }
            per_pos.iter().all(|&c| c == 1)
                && per_color.iter().zip(parts.iter()).all(|(&c, &p)| c == p)
        }
    }
}

fn product_membership(ms: &[usize], _d: &Domain, set: &HashSet<ElemId>) -> bool {
    let n = ms.len();
    if set.len() != n {
        return false;
    }
    let mut offsets = vec![0 as ElemId; n + 1];
    for i in 0..n {
        offsets[i + 1] = offsets[i] + ms[i] as ElemId;
    }
    let mut per_coord = vec![0usize; n];
    for &e in set {
        let i = match offsets[1..].iter().position(|&o| e < o) {
            Some(i) => i,
            None => return false,
        };
        per_coord[i] += 1;
    }
    per_coord.iter().all(|&c| c == 1)
}

fn parse_edge_vertices(label: &str, parts: &[usize], n: usize) -> Vec<usize> {
    // labels: "{a,b,...}" with vertex "v" (single part) or "(p,v)"
    let inner = label.trim_start_matches('{').trim_end_matches('}');
    if parts.len() == 1 {
        inner.split(',').map(|t| t.trim().parse::<usize>().unwrap() - 1).collect()
    } else {
        let mut out = Vec::new();
        let mut offsets = vec![0usize];
        for &l in parts {
            offsets.push(offsets.last().unwrap() + l * n);
        }
        for tok in inner.split("),") {
            let t = tok.trim_start_matches('(').trim_end_matches(')');
            let (p, v) = t.split_once(',').unwrap();
            let p: usize = p.trim().parse().unwrap();
            let v: usize = v.trim().parse().unwrap();
            out.push(offsets[p - 1] + (v - 1));
        }
        out
    }
}

/// Closed-form structural parameters (ratios are lower bounds).
pub fn parameter_table(spec: &DomainSpec) -> DomainParams {
    match spec {
        DomainSpec::Cube(n) => DomainParams {
            chunk: 1,
            max_degree: 1,
            conflict_bound: ConflictBound::AtLeast(*n),
            bs_ratio_lb: rat(1, 1),
            sens_ratio_lb: Some(rat(1, 1)),
        },
        DomainSpec::Product(ms) => DomainParams {
            chunk: 1,
            max_degree: 1,
            conflict_bound: ConflictBound::AtLeast(ms.len()),
            bs_ratio_lb: rat(1, 1),
            sens_ratio_lb: Some(rat(1, 1)),
        },
        DomainSpec::SymmetricGroup(n) => DomainParams {
            chunk: 2,
            max_degree: 2,
            conflict_bound: ConflictBound::AtLeast(*n),
            bs_ratio_lb: rat(1, 3),
            sens_ratio_lb: Some(rat(1, 3)),
        },
        DomainSpec::PerfectMatching { n, parts } => {
            let total: i64 = parts.iter().map(|&l| l as i64).sum();
            DomainParams {
                chunk: 2,
                max_degree: total as usize,
                conflict_bound: ConflictBound::AtLeast(*n),
                bs_ratio_lb: rat(1, total * (total - 1) + 1),
                sens_ratio_lb: if total <= 2 { Some(rat(1, 3)) } else { None },
            }
        }
        DomainSpec::Multislice(parts) => {
            let min = *parts.iter().min().unwrap();
            DomainParams {
                chunk: 2,
                max_degree: 1,
                conflict_bound: ConflictBound::Exact(min / 2),
                bs_ratio_lb: if parts.len() == 2 { rat(1, 2) } else { rat(1, 3) },
                sens_ratio_lb: Some(if parts.len() == 2 { rat(1, 2) } else { rat(1, 3) }),
            }
        }
    }
}

/// Sensitivity theorem factor for the domain kind: s(f) >= sqrt(factor * deg f).
/// None for hypermatchings with |lambda| >= 3 (no such bound is available).
pub fn sensitivity_theorem_factor(spec: &DomainSpec) -> Option<Rat> {
    match spec {
        DomainSpec::Cube(_) | DomainSpec::Product(_) => Some(rat(1, 1)),
        DomainSpec::SymmetricGroup(_) => Some(rat(1, 2)),
        DomainSpec::PerfectMatching { parts, .. } => {
            let total: usize = parts.iter().sum();
            if parts.len() == 1 && total == 2 {
                Some(rat(1, 1))
            } else if total == 2 {
                // P(n;1,1) is the symmetric group
                Some(rat(1, 2))
            } else {
                None
            }
        }
        DomainSpec::Multislice(_) => Some(rat(1, 2)),
    }
}

/// Decode a point of a symmetric-group domain into one-line notation
/// (1-based images).
pub fn point_to_perm(n: usize, p: &Point) -> Vec<usize> {
    let mut perm = vec![0usize; n];
    for &e in &p.0 {
        let e = e as usize;
        perm[e / n] = (e % n) + 1;
    }
    perm
}

/// Decode a point of `pm:n,2` into a list of edges over vertices 1..=2n.
pub fn point_to_matching(d: &Domain, p: &Point) -> Vec<(usize, usize)> {
    p.0.iter()
        .map(|&e| {
            let label = &d.universe.labels[e as usize];
            let inner = label.trim_start_matches('{').trim_end_matches('}');
            let mut it = inner.split(',').map(|t| t.trim().parse::<usize>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

/// Decode a multislice point into its color vector (1-based colors).
pub fn point_to_colors(m: usize, p: &Point) -> Vec<usize> {
    let mut colors = vec![0usize; p.0.len()];
    for &e in &p.0 {
        let e = e as usize;
        colors[e / m] = (e % m) + 1;
    }
    colors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::validate_domain;
    use rand::{Rng, SeedableRng};

    #[test]
    fn parse_round_trip() {
        for s in ["cube:4", "prod:2,3,2", "sym:4", "pm:3,2", "ms:2,3"] {
            let spec = DomainSpec::parse(s).unwrap();
            assert_eq!(spec.to_string_form(), s);
        }
        assert!(DomainSpec::parse("grassmann:3").is_err());
        assert!(DomainSpec::parse("ms:5").is_err());
        assert!(DomainSpec::parse("prod:1,2").is_err());
    }

    #[test]
    fn sym4_shape() {
        let d = build(&DomainSpec::SymmetricGroup(4)).unwrap();
        assert_eq!(d.len(), 24);
        assert_eq!(d.queries.len(), 8);
        assert!(validate_domain(&d).is_empty());
    }

    #[test]
    fn pm_point_counts() {
        let d = build(&DomainSpec::PerfectMatching { n: 3, parts: vec![2] }).unwrap();
        assert_eq!(d.len(), 15); // (2*3-1)!! = 5*3*1
        assert!(validate_domain(&d).is_empty());
        let d = build(&DomainSpec::PerfectMatching { n: 2, parts: vec![2] }).unwrap();
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn multislice_point_counts() {
        let d = build(&DomainSpec::Multislice(vec![2, 3])).unwrap();
        assert_eq!(d.len(), 10); // C(5,2)
        assert!(validate_domain(&d).is_empty());
    }

    #[test]
    fn every_built_domain_validates() {
        for s in ["cube:2", "cube:3", "prod:2,3,2", "sym:3", "pm:2,3", "ms:1,1,2"] {
            let spec = DomainSpec::parse(s).unwrap();
            let d = build(&spec).unwrap();
            assert!(validate_domain(&d).is_empty(), "{s} failed validation");
        }
    }

    #[test]
    fn scale_cap_refusal() {
        let spec = DomainSpec::SymmetricGroup(12);
        assert!(matches!(build(&spec), Err(Error::ScaleCap { .. })));
    }

    #[test]
    fn sym_equals_bipartite_matching_domain() {
        // build(sym:n) and build(pm:n,1,1) agree point-for-point under
        // (i,j) <-> {(1,i),(2,j)}
        let n = 3;
        let s = build(&DomainSpec::SymmetricGroup(n)).unwrap();
        let p = build(&DomainSpec::PerfectMatching { n, parts: vec![1, 1] }).unwrap();
        assert_eq!(s.len(), p.len());
        // map each pm point to a permutation and check it appears in s
        let mut sym_points: Vec<Vec<usize>> =
            s.points.iter().map(|pt| point_to_perm(n, pt)).collect();
        sym_points.sort();
        let mut pm_perms: Vec<Vec<usize>> = p
            .points
            .iter()
            .map(|pt| {
                let mut perm = vec![0usize; n];
                for &e in &pt.0 {
                    let label = &p.universe.labels[e as usize];
                    // "{(1,i),(2,j)}"
                    let inner = label.trim_start_matches('{').trim_end_matches('}');
                    let mut nums = Vec::new();
                    for tok in inner.split("),") {
                        let t = tok.trim_start_matches('(').trim_end_matches(')');
                        let (a, b) = t.split_once(',').unwrap();
                        nums.push((a.parse::<usize>().unwrap(), b.parse::<usize>().unwrap()));
                    }
                    let i = nums.iter().find(|(p, _)| *p == 1).unwrap().1;
                    let j = nums.iter().find(|(p, _)| *p == 2).unwrap().1;
                    perm[i - 1] = j;
                }
                perm
            })
            .collect();
        pm_perms.sort();
        assert_eq!(sym_points, pm_perms);
    }

    #[test]
    fn membership_accepts_points_rejects_random_nonpoints() {
        for s in ["cube:3", "sym:3", "pm:3,2", "ms:2,3", "prod:2,3"] {
            let spec = DomainSpec::parse(s).unwrap();
            let d = build(&spec).unwrap();
            for p in &d.points {
                assert!(membership(&spec, &d, &p.0), "{s} rejected its own point");
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
            let point_set: std::collections::HashSet<&Vec<ElemId>> =
                d.points.iter().map(|p| &p.0).collect();
            let mut tried = 0;
            while tried < 100 {
                let mut cand: Vec<ElemId> = Vec::new();
                while cand.len() < d.dimension {
                    let e = rng.gen_range(0..d.universe.size()) as ElemId;
                    if !cand.contains(&e) {
                        cand.push(e);
                    }
                }
                cand.sort_unstable();
                if point_set.contains(&cand) {
                    continue;
                }
                tried += 1;
                assert!(!membership(&spec, &d, &cand), "{s} accepted a non-point");
            }
        }
    }

    #[test]
    fn membership_examples() {
        let spec = DomainSpec::SymmetricGroup(3);
        let d = build(&spec).unwrap();
        let ok: Vec<ElemId> = ["(1,2)", "(2,3)", "(3,1)"]
            .iter()
            .map(|l| d.universe.id_of(l).unwrap())
            .collect();
        assert!(membership(&spec, &d, &ok));
        let bad: Vec<ElemId> = ["(1,2)", "(2,2)", "(3,1)"]
            .iter()
            .map(|l| d.universe.id_of(l).unwrap())
            .collect();
        assert!(!membership(&spec, &d, &bad));

        let spec = DomainSpec::PerfectMatching { n: 3, parts: vec![2] };
        let d = build(&spec).unwrap();
        let ok: Vec<ElemId> = ["{1,2}", "{3,4}", "{5,6}"]
            .iter()
            .map(|l| d.universe.id_of(l).unwrap())
            .collect();
        assert!(membership(&spec, &d, &ok));
    }

    #[test]
    fn parameter_tables_match_brute_force() {
        use crate::domain as dc;
        for s in ["cube:3", "prod:2,2,2", "sym:3", "pm:3,2", "ms:2,3", "ms:2,2"] {
            let spec = DomainSpec::parse(s).unwrap();
            let d = build(&spec).unwrap();
            let t = parameter_table(&spec);
            assert_eq!(t.chunk, dc::chunk_size(&d).unwrap(), "{s} chunk");
            assert_eq!(t.max_degree, dc::max_degree_param(&d), "{s} max degree");
            let brute = dc::conflict_bound(&d, d.dimension);
            assert_eq!(t.conflict_bound.value().min(d.dimension), brute.value(), "{s} conflict");
            let bs = dc::block_sensitivity_ratio_lb(&d).unwrap();
            assert!(t.bs_ratio_lb <= bs.value, "{s} bs ratio");
            if let Some(sb) = &t.sens_ratio_lb {
                let sens = dc::sensitivity_ratio_lb(&d).unwrap();
                assert!(*sb <= sens.value, "{s} sens ratio");
            }
            assert!(t.ratios_consistent());
        }
    }

    #[test]
    fn parameter_table_examples() {
        let t = parameter_table(&DomainSpec::Product(vec![2, 2, 2]));
        assert_eq!((t.max_degree, t.chunk), (1, 1));
        assert_eq!(t.conflict_bound.value(), 3);
        assert_eq!(t.bs_ratio_lb, rat(1, 1));
        let t = parameter_table(&DomainSpec::PerfectMatching { n: 4, parts: vec![1, 1] });
        assert_eq!((t.max_degree, t.chunk), (2, 2));
        assert_eq!(t.conflict_bound.value(), 4);
        assert!(t.sens_ratio_lb.unwrap() >= rat(1, 3));
        let t = parameter_table(&DomainSpec::Multislice(vec![2, 3]));
        assert_eq!(t.conflict_bound, ConflictBound::Exact(1));
        assert_eq!(t.max_degree, 1);
        assert!(t.sens_ratio_lb.unwrap() >= rat(1, 3));
    }
}
