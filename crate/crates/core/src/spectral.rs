//! Pseudo-characters over the symmetric group, perfect matching scheme and
//! multislices: signed sums of tabloid indicators that witness degree and
//! embed signed cubes. Also the spectral side: candidate matrix
//! verification against the eigenvalue profile used for intersecting-family
//! bounds, Hoffman-style density checks, and the star subset-degree check.

use std::collections::HashSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};

use crate::bitset::Mask;
use crate::catalog::{point_to_colors, point_to_matching, point_to_perm, DomainSpec};
use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::measures;
use crate::numerics::eigen::symmetric_eigen;
use crate::numerics::rat::{rat, rat_to_f64, rat_zero, Rat};
use crate::numerics::RatMatrix;
use crate::tables::Tables;

/// Numbers arranged in rows; the order inside a row is irrelevant except as
/// a canonical arrangement (rows kept sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tabloid {
    pub shape: Vec<usize>,
    pub rows: Vec<Vec<u32>>,
}

impl Tabloid {
    pub fn new(mut rows: Vec<Vec<u32>>) -> Self {
        for r in rows.iter_mut() {
            r.sort_unstable();
        }
        let shape = rows.iter().map(|r| r.len()).collect();
        Tabloid { shape, rows }
    }

    /// Standard content: rows partition {1..n}.
    pub fn is_standard_content(&self, n: usize) -> bool {
        let mut seen = vec![false; n + 1];
        let mut count = 0;
        for r in &self.rows {
            for &v in r {
                if v == 0 || v as usize > n || seen[v as usize] {
                    return false;
                }
                seen[v as usize] = true;
                count += 1;
            }
        }
        count == n
    }

    fn row_of(&self, v: u32) -> Option<usize> {
        self.rows.iter().position(|r| r.contains(&v))
    }
}

/// All (sign, tabloid) variants obtained by permuting each column of the
/// canonical arrangement.
fn column_variants(t: &Tabloid) -> Vec<(i32, Tabloid)> {
    let n_cols = t.shape.first().copied().unwrap_or(0);
    let mut variants: Vec<(i32, Vec<Vec<u32>>)> = vec![(1, t.rows.clone())];
    for c in 0..n_cols {
        let rows_in_col: Vec<usize> =
            (0..t.rows.len()).filter(|&r| t.rows[r].len() > c).collect();
        let k = rows_in_col.len();
        if k <= 1 {
            continue;
        }
        let perms = permutations(k);
        let mut next = Vec::with_capacity(variants.len() * perms.len());
        for (sign, rows) in &variants {
            let col_vals: Vec<u32> = rows_in_col.iter().map(|&r| rows[r][c]).collect();
            for p in &perms {
                let mut new_rows = rows.clone();
                for (slot, &src) in p.perm.iter().enumerate() {
                    new_rows[rows_in_col[slot]][c] = col_vals[src];
                }
                next.push((sign * p.sign, new_rows));
            }
        }
        variants = next;
    }
    variants.into_iter().map(|(sign, rows)| (sign, Tabloid::new(rows))).collect()
}

struct SignedPerm {
    perm: Vec<usize>,
    sign: i32,
}

fn permutations(k: usize) -> Vec<SignedPerm> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        let mut inversions = 0;
        for i in 0..k {
            for j in i + 1..k {
                if cur[i] > cur[j] {
                    inversions += 1;
                }
            }
        }
        out.push(SignedPerm { perm: cur.clone(), sign: if inversions % 2 == 0 { 1 } else { -1 } });
        if !next_perm(&mut cur) {
            break;
        }
    }
    out
}

fn next_perm(p: &mut [usize]) -> bool {
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

#[derive(Clone, Debug)]
pub enum CharKind {
    /// chi_{A,B} on the symmetric group, summed over column permutations of
    /// the position tabloid A (the arrangement whose entries also provide
    /// the sign-flipping transpositions).
    SymPair { a: Tabloid, b: Tabloid },
    /// chi_A on the perfect matching scheme: column permutations of A.
    PmSingle { a: Tabloid },
    /// chi_{A,B} on a multislice: A holds positions, B colour content;
    /// columns of A are permuted.
    MsPair { a: Tabloid, b: Tabloid },
}

/// A {-1,0,1}-valued function witnessing degree.
#[derive(Clone, Debug)]
pub struct PseudoCharacter {
    pub kind: CharKind,
    pub shape: Vec<usize>,
    /// the level this character lives on
    pub degree: usize,
    pub values: Vec<i8>,
}

/// Indicator for a tabloid pair on a permutation: each row of `a` is mapped
/// onto the same row of `b`.
pub fn eval_e_sym(a: &Tabloid, b: &Tabloid, perm: &[usize]) -> bool {
    a.rows.iter().zip(&b.rows).all(|(ra, rb)| {
        let mut image: Vec<u32> = ra.iter().map(|&x| perm[x as usize - 1] as u32).collect();
        image.sort_unstable();
        image == *rb
    })
}

/// Indicator on a perfect matching: both endpoints of every edge lie in the
/// same row.
pub fn eval_e_pm(a: &Tabloid, matching: &[(usize, usize)]) -> bool {
    matching.iter().all(|&(u, v)| a.row_of(u as u32) == a.row_of(v as u32))
}

/// Indicator on a multislice point: the colours at the positions of each
/// row of `a` form exactly the multiset in the same row of `b`.
pub fn eval_e_ms(a: &Tabloid, b: &Tabloid, colors: &[usize]) -> bool {
    a.rows.iter().zip(&b.rows).all(|(ra, rb)| {
        let mut got: Vec<u32> = ra.iter().map(|&x| colors[x as usize - 1] as u32).collect();
        got.sort_unstable();
        got == *rb
    })
}

/// Raw signed sum over column variants; a uniform integer multiple of the
/// final character.
fn raw_values(kind: &CharKind, d: &Domain, spec: &DomainSpec) -> Vec<i64> {
    debug_raw_values(kind, d, spec)
}

#[doc(hidden)]
pub fn debug_raw_values(kind: &CharKind, d: &Domain, spec: &DomainSpec) -> Vec<i64> {
    match kind {
        CharKind::SymPair { a, b } => {
            let n = d.dimension;
            let variants = column_variants(a);
            d.points
                .iter()
                .map(|p| {
                    let perm = point_to_perm(n, p);
                    variants
                        .iter()
                        .map(|(s, av)| if eval_e_sym(av, b, &perm) { *s as i64 } else { 0 })
                        .sum()
                })
                .collect()
        }
        CharKind::PmSingle { a } => {
            let variants = column_variants(a);
            d.points
                .iter()
                .map(|p| {
                    let m = point_to_matching(d, p);
                    variants
                        .iter()
                        .map(|(s, av)| if eval_e_pm(av, &m) { *s as i64 } else { 0 })
                        .sum()
                })
                .collect()
        }
        CharKind::MsPair { a, b } => {
            let DomainSpec::Multislice(parts) = spec else { unreachable!() };
            let m = parts.len();
            let variants = column_variants(a);
            d.points
                .iter()
                .map(|p| {
                    let colors = point_to_colors(m, p);
                    variants
                        .iter()
                        .map(|(s, av)| if eval_e_ms(av, b, &colors) { *s as i64 } else { 0 })
                        .sum()
                })
                .collect()
        }
    }
}

/// Evaluate the raw signed sum over all points and divide out the common
/// factor. `None` for the identically-zero sum.
///
/// Symmetric-group and multislice characters normalize to {-1,0,1}. On the
/// matching scheme several row partitions can certify the same matching, so
/// the values are only locally uniform: each cube orbit carries a constant
/// magnitude (checked in [`verify_inducing`]), which is all the sign
/// argument needs.
pub fn make_character(kind: CharKind, d: &Domain, spec: &DomainSpec) -> Option<PseudoCharacter> {
    let raw = raw_values(&kind, d, spec);
    let g = raw.iter().fold(0i64, |acc, &v| gcd64(acc, v.abs()));
    if g == 0 {
        return None;
    }
    let pm = matches!(kind, CharKind::PmSingle { .. });
    let values: Vec<i8> = raw
        .iter()
        .map(|&v| {
            let q = v / g;
            assert!(
                pm || (-1..=1).contains(&q),
                "character values must normalize to -1,0,1"
            );
            i8::try_from(q).expect("normalized character value fits in i8")
        })
        .collect();
    let shape = match &kind {
        CharKind::SymPair { a, .. } | CharKind::PmSingle { a } | CharKind::MsPair { a, .. } => {
            a.shape.clone()
        }
    };
    let degree = match &kind {
        // pm shapes are doubled partitions over 2n vertices
        CharKind::PmSingle { .. } => d.dimension - shape[0] / 2,
        _ => d.dimension - shape[0],
    };
    Some(PseudoCharacter { kind, shape, degree, values })
}

fn gcd64(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

/// All partitions of n whose first part is at least `min_first`.
fn partitions_with_min_first(n: usize, min_first: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(rem)).rev() {
            cur.push(part);
            rec(rem - part, part, cur, out);
            cur.pop();
        }
    }
    for first in min_first.max(1)..=n {
        let mut cur = vec![first];
        rec(n - first, first, &mut cur, &mut out);
    }
    out
}

/// All tabloids of a shape filled with the numbers 1..=n.
fn standard_content_tabloids(shape: &[usize], n: usize) -> Vec<Tabloid> {
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); shape.len()];
    fn rec(v: u32, n: usize, shape: &[usize], rows: &mut Vec<Vec<u32>>, out: &mut Vec<Tabloid>) {
        if v as usize > n {
            out.push(Tabloid::new(rows.clone()));
            return;
        }
        for r in 0..shape.len() {
            if rows[r].len() < shape[r] {
                rows[r].push(v);
                rec(v + 1, n, shape, rows, out);
                rows[r].pop();
            }
        }
    }
    rec(1, n, shape, &mut rows, &mut out);
    // rows are built with increasing entries, so every arrangement appears
    // exactly once as a sorted tabloid
    out
}

/// All tabloids of a shape whose rows carry colour multisets with
/// `content[c]` copies of colour c+1 in total.
fn content_tabloids(shape: &[usize], content: &[usize]) -> Vec<Tabloid> {
    let mut out = Vec::new();
    let mut remaining: Vec<usize> = content.to_vec();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    fn fill_row(
        row_len: usize,
        min_color: usize,
        remaining: &mut Vec<usize>,
        row: &mut Vec<u32>,
        rows: &mut Vec<Vec<u32>>,
        shape: &[usize],
        out: &mut Vec<Tabloid>,
    ) {
        if row.len() == row_len {
            rows.push(row.clone());
            next_row(remaining, rows, shape, out);
            rows.pop();
            return;
        }
        for c in min_color..remaining.len() {
            if remaining[c] > 0 {
                remaining[c] -= 1;
                row.push(c as u32 + 1);
                fill_row(row_len, c, remaining, row, rows, shape, out);
                row.pop();
                remaining[c] += 1;
            }
        }
    }
    fn next_row(
        remaining: &mut Vec<usize>,
        rows: &mut Vec<Vec<u32>>,
        shape: &[usize],
        out: &mut Vec<Tabloid>,
    ) {
        let r = rows.len();
        if r == shape.len() {
            out.push(Tabloid::new(rows.clone()));
            return;
        }
        fill_row(shape[r], 0, remaining, &mut Vec::new(), rows, shape, out);
    }
    next_row(&mut remaining, &mut rows, shape, &mut out);
    out
}

/// The spanning family of pseudo-characters at level <= deg, deduplicated
/// by value vector, zero characters dropped.
pub fn pseudo_char_family(
    spec: &DomainSpec,
    d: &Domain,
    deg: usize,
) -> Result<Vec<PseudoCharacter>> {
    let n = d.dimension;
    let mut out: Vec<PseudoCharacter> = Vec::new();
    let mut seen: HashSet<Vec<i8>> = HashSet::new();
    let mut push = |c: Option<PseudoCharacter>, out: &mut Vec<PseudoCharacter>| {
        if let Some(c) = c {
            if seen.insert(c.values.clone()) {
                out.push(c);
            }
        }
    };
    match spec {
        DomainSpec::SymmetricGroup(_) => {
            for shape in partitions_with_min_first(n, n.saturating_sub(deg)) {
                let tabs = standard_content_tabloids(&shape, n);
                for a in &tabs {
                    for b in &tabs {
                        let c = make_character(
                            CharKind::SymPair { a: a.clone(), b: b.clone() },
                            d,
                            spec,
                        );
                        push(c, &mut out);
                    }
                }
            }
        }
        DomainSpec::PerfectMatching { n: nn, parts } if parts == &[2] => {
            for lambda in partitions_with_min_first(*nn, nn.saturating_sub(deg)) {
                let shape: Vec<usize> = lambda.iter().map(|&p| 2 * p).collect();
                for a in standard_content_tabloids(&shape, 2 * nn) {
                    let c = make_character(CharKind::PmSingle { a }, d, spec);
                    push(c, &mut out);
                }
            }
        }
        DomainSpec::Multislice(parts) => {
            for shape in partitions_with_min_first(n, n.saturating_sub(deg)) {
                let a_tabs = standard_content_tabloids(&shape, n);
                let b_tabs = content_tabloids(&shape, parts);
                for a in &a_tabs {
                    for b in &b_tabs {
                        let c = make_character(
                            CharKind::MsPair { a: a.clone(), b: b.clone() },
                            d,
                            spec,
                        );
                        push(c, &mut out);
                    }
                }
            }
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "pseudo-characters are available for sym, pm:n,2 and multislices, not {spec}"
            )))
        }
    }
    Ok(out)
}

/// The spanning property: characters at level <= deg lie in and span the
/// degree-<=deg function space.
pub fn spanning_rank_matches<M: Mask>(
    chars: &[PseudoCharacter],
    t: &Tables<M>,
    deg: usize,
) -> bool {
    for c in chars {
        for w in &t.complement_basis[deg] {
            let mut acc = num_bigint::BigInt::zero();
            for (wi, &v) in w.iter().zip(&c.values) {
                if v > 0 {
                    acc += wi;
                } else if v < 0 {
                    acc -= wi;
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    let rows: Vec<Vec<Rat>> = chars
        .iter()
        .map(|c| c.values.iter().map(|&v| rat(v as i64, 1)).collect())
        .collect();
    if rows.is_empty() {
        return t.span_dim[deg] == 0;
    }
    RatMatrix::from_rows(rows).rank() == t.span_dim[deg]
}

// ---------------------------------------------------------------------------
// inducing structure

/// One verified family of cube embeddings: support orbits with their
/// bit-pattern -> point maps.
#[derive(Clone, Debug)]
pub struct InducingWitness {
    /// the guaranteed cube dimension: min over orbits
    pub d_prime: usize,
    /// disjoint transpositions as (item, item) pairs, 1-based
    pub moves: Vec<(u32, u32)>,
    /// each support orbit with the basis moves acting freely on it; the
    /// orbit vector is indexed by the bit patterns of those basis moves
    pub parts: Vec<(Vec<(u32, u32)>, Vec<usize>)>,
}

fn apply_move(spec: &DomainSpec, d: &Domain, pi: usize, mv: (u32, u32)) -> usize {
    let p = &d.points[pi];
    let new_point: Point = match spec {
        DomainSpec::SymmetricGroup(n) => {
            let mut perm = point_to_perm(*n, p);
            perm.swap(mv.0 as usize - 1, mv.1 as usize - 1);
            let mut ids: Vec<u32> =
                (1..=*n).map(|i| ((i - 1) * n + (perm[i - 1] - 1)) as u32).collect();
            ids.sort_unstable();
            Point(ids)
        }
        DomainSpec::PerfectMatching { .. } => {
            let mut m = point_to_matching(d, p);
            let (a, b) = (mv.0 as usize, mv.1 as usize);
            let find =
                |m: &Vec<(usize, usize)>, v: usize| m.iter().position(|&(x, y)| x == v || y == v);
            let ia = find(&m, a).expect("vertex is matched");
            let ib = find(&m, b).expect("vertex is matched");
            if ia == ib {
                return pi; // a and b are matched to each other: no effect
            }
            let mate = |e: (usize, usize), v: usize| if e.0 == v { e.1 } else { e.0 };
            let ma = mate(m[ia], a);
            let mb = mate(m[ib], b);
            m[ia] = (a.min(mb), a.max(mb));
            m[ib] = (b.min(ma), b.max(ma));
            let mut ids: Vec<u32> = m
                .iter()
                .map(|&(u, v)| d.universe.id_of(&format!("{{{u},{v}}}")).expect("edge exists"))
                .collect();
            ids.sort_unstable();
            Point(ids)
        }
        DomainSpec::Multislice(parts) => {
            let m = parts.len();
            let mut colors = point_to_colors(m, p);
            colors.swap(mv.0 as usize - 1, mv.1 as usize - 1);
            let mut ids: Vec<u32> =
                colors.iter().enumerate().map(|(i, &c)| (i * m + (c - 1)) as u32).collect();
            ids.sort_unstable();
            Point(ids)
        }
        _ => unreachable!("inducing moves exist only for supported kinds"),
    };
    d.point_index(&new_point).expect("moves stay inside the domain")
}

/// All partitions of `cells` into pairs plus at most one singleton.
fn pairings(cells: &[u32]) -> Vec<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    fn rec(rest: &[u32], cur: &mut Vec<(u32, u32)>, singleton_used: bool, out: &mut Vec<Vec<(u32, u32)>>) {
        match rest {
            [] => out.push(cur.clone()),
            [x, tail @ ..] => {
                for (i, &y) in tail.iter().enumerate() {
                    let mut next: Vec<u32> = tail.to_vec();
                    next.remove(i);
                    cur.push((*x, y));
                    rec(&next, cur, singleton_used, out);
                    cur.pop();
                }
                if rest.len() % 2 == 1 && !singleton_used {
                    rec(tail, cur, true, out);
                }
            }
        }
    }
    rec(cells, &mut Vec::new(), cells.len() % 2 == 0, &mut out);
    out
}

/// Exhaustively verify that the character embeds signed cubes: partition
/// its support into orbits under disjoint transpositions drawn from the
/// columns of A, map bit patterns to points, and check the neighbour and
/// sign-alternation properties. Several pairings of each column are tried;
/// the first that verifies wins.
pub fn verify_inducing<M: Mask>(
    spec: &DomainSpec,
    d: &Domain,
    t: &Tables<M>,
    c: &PseudoCharacter,
) -> Result<InducingWitness> {
    let a = match &c.kind {
        CharKind::SymPair { a, .. } | CharKind::PmSingle { a } | CharKind::MsPair { a, .. } => a,
    };
    let n_cols = a.shape.first().copied().unwrap_or(0);
    let mut per_column: Vec<Vec<Vec<(u32, u32)>>> = Vec::new();
    for col in 0..n_cols {
        let cells: Vec<u32> = (0..a.rows.len())
            .filter(|&r| a.rows[r].len() > col)
            .map(|r| a.rows[r][col])
            .collect();
        if cells.len() >= 2 {
            per_column.push(pairings(&cells));
        }
    }
    // cartesian product of per-column pairings, consecutive pairing first
    let mut combos: Vec<Vec<(u32, u32)>> = vec![Vec::new()];
    for col in &per_column {
        let mut next = Vec::with_capacity(combos.len() * col.len());
        for base in &combos {
            for choice in col {
                let mut m = base.clone();
                m.extend(choice.iter().copied());
                next.push(m);
            }
        }
        combos = next;
    }
    let mut last_err = Error::InvalidInput("no pairing candidates".into());
    for moves in combos {
        match try_inducing(spec, d, t, c, &moves) {
            Ok(w) => return Ok(w),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

fn try_inducing<M: Mask>(
    spec: &DomainSpec,
    d: &Domain,
    t: &Tables<M>,
    c: &PseudoCharacter,
    moves: &[(u32, u32)],
) -> Result<InducingWitness> {
    let mut touched = HashSet::new();
    for &(x, y) in moves {
        if !touched.insert(x) || !touched.insert(y) {
            return Err(Error::InvalidInput("column pairs are not disjoint".into()));
        }
    }

    let support: Vec<usize> = (0..t.n_points).filter(|&pi| c.values[pi] != 0).collect();
    let support_set: HashSet<usize> = support.iter().copied().collect();
    let mut visited: HashSet<usize> = HashSet::new();
    let mut parts: Vec<(Vec<(u32, u32)>, Vec<usize>)> = Vec::new();
    let mut min_dim = usize::MAX;
    for &start in &support {
        if visited.contains(&start) {
            continue;
        }
        // basis: moves that enlarge the orbit generated so far
        let mut basis: Vec<(u32, u32)> = Vec::new();
        let mut reached: Vec<usize> = vec![start];
        for &mv in moves {
            let image: Vec<usize> =
                reached.iter().map(|&pi| apply_move(spec, d, pi, mv)).collect();
            let reached_set: HashSet<usize> = reached.iter().copied().collect();
            if image.iter().all(|pi| !reached_set.contains(pi)) {
                basis.push(mv);
                reached.extend(image);
            } else if !image.iter().all(|pi| reached_set.contains(pi)) {
                return Err(Error::InvalidInput(format!(
                    "move ({},{}) neither fixes nor extends the orbit of #{start}",
                    mv.0, mv.1
                )));
            }
        }
        let dim = basis.len();
        // orbit closure under every move, not only the basis
        for &mv in moves {
            let reached_set: HashSet<usize> = reached.iter().copied().collect();
            for &pi in &reached {
                if !reached_set.contains(&apply_move(spec, d, pi, mv)) {
                    return Err(Error::InvalidInput("orbit is not closed under the moves".into()));
                }
            }
        }
        let orbit: Vec<usize> = (0..(1u64 << dim))
            .map(|bits| {
                let mut pi = start;
                for (k, &mv) in basis.iter().enumerate() {
                    if bits >> k & 1 == 1 {
                        pi = apply_move(spec, d, pi, mv);
                    }
                }
                pi
            })
            .collect();
        let distinct: HashSet<usize> = orbit.iter().copied().collect();
        if distinct.len() != 1 << dim {
            return Err(Error::InvalidInput(format!(
                "orbit of point #{start} has size {} != 2^{dim}",
                distinct.len()
            )));
        }
        if !distinct.iter().all(|pi| support_set.contains(pi)) {
            return Err(Error::InvalidInput(format!("orbit of point #{start} leaves the support")));
        }
        let magnitude = c.values[start].abs();
        for bits in 0..(1u64 << dim) {
            let p_here = orbit[bits as usize];
            if c.values[p_here].abs() != magnitude {
                return Err(Error::InvalidInput("magnitude varies inside an orbit".into()));
            }
            let mut diffs: Vec<Vec<u32>> = Vec::new();
            for k in 0..dim {
                let p_there = orbit[(bits ^ (1 << k)) as usize];
                if t.dist[p_here][p_there] as usize != t.chunk {
                    return Err(Error::InvalidInput(format!(
                        "neighbour distance {} != chunk {}",
                        t.dist[p_here][p_there], t.chunk
                    )));
                }
                if c.values[p_here] != -c.values[p_there] {
                    return Err(Error::InvalidInput(format!(
                        "sign does not alternate between #{p_here} and #{p_there}"
                    )));
                }
                diffs.push(crate::domain::set_difference(
                    &d.points[p_here].0,
                    &d.points[p_there].0,
                ));
            }
            for i in 0..diffs.len() {
                for j in i + 1..diffs.len() {
                    if diffs[i].iter().any(|e| diffs[j].contains(e)) {
                        return Err(Error::InvalidInput(
                            "difference blocks of cube neighbours overlap".into(),
                        ));
                    }
                }
            }
        }
        visited.extend(distinct);
        min_dim = min_dim.min(dim);
        parts.push((basis, orbit));
    }
    let d_prime = if parts.is_empty() { 0 } else { min_dim };

    let needed = match spec {
        DomainSpec::PerfectMatching { .. } => c.degree,
        _ => c.degree.div_ceil(2),
    };
    if d_prime < needed {
        return Err(Error::InvalidInput(format!(
            "embedding dimension {d_prime} below the guaranteed {needed}"
        )));
    }
    Ok(InducingWitness { d_prime, moves: moves.to_vec(), parts })
}

/// A level-deg character correlating with f; existence is the spanning
/// property, which callers assert separately.
pub fn degree_witness<M: Mask>(
    spec: &DomainSpec,
    d: &Domain,
    t: &Tables<M>,
    f: &M,
) -> Result<(PseudoCharacter, i64)> {
    let deg = t.degree_of_mask(f);
    let family = pseudo_char_family(spec, d, deg)?;
    for c in family {
        if c.degree != deg {
            continue;
        }
        let corr: i64 =
            (0..t.n_points).filter(|&pi| f.test(pi)).map(|pi| c.values[pi] as i64).sum();
        if corr != 0 {
            return Ok((c, corr));
        }
    }
    Err(Error::InvalidInput(
        "no level character correlates with f; spanning must have failed".into(),
    ))
}

// ---------------------------------------------------------------------------
// candidate matrices

/// A square matrix over the points, tested against the eigenvalue profile
/// that drives intersecting-family bounds at level t.
#[derive(Clone, Debug)]
pub struct CandidateMatrix {
    pub t: usize,
    pub entries: RatMatrix,
}

/// The normalized disjointness matrix: A(x,y) = 1/r when x and y share no
/// element, where r is the (uniform) disjointness degree.
pub fn derangement_matrix(d: &Domain, t: usize) -> Result<CandidateMatrix> {
    let n = d.len();
    let disjoint = |i: usize, j: usize| {
        i != j && crate::domain::set_intersection_size(&d.points[i].0, &d.points[j].0) == 0
    };
    let counts: Vec<usize> =
        (0..n).map(|i| (0..n).filter(|&j| disjoint(i, j)).count()).collect();
    let r = counts[0];
    if r == 0 || counts.iter().any(|&c| c != r) {
        return Err(Error::InvalidInput("disjointness graph is not regular".into()));
    }
    let mut m = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if disjoint(i, j) {
                m[(i, j)] = rat(1, r as i64);
            }
        }
    }
    Ok(CandidateMatrix { t, entries: m })
}

#[derive(Clone, Debug, PartialEq)]
pub enum PropertyStatus {
    Pass,
    Fail(String),
    /// an eigenvalue sits within the margin of the threshold
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct TGoodReport {
    pub symmetric: PropertyStatus,
    pub support: PropertyStatus,
    pub row_sums: PropertyStatus,
    pub low_level_eigen: PropertyStatus,
    pub high_level_gap: PropertyStatus,
    pub omega: Rat,
}

impl TGoodReport {
    pub fn all_pass(&self) -> bool {
        [
            &self.symmetric,
            &self.support,
            &self.row_sums,
            &self.low_level_eigen,
            &self.high_level_gap,
        ]
        .iter()
        .all(|p| matches!(p, PropertyStatus::Pass))
    }

    pub fn structural_pass(&self) -> bool {
        [&self.symmetric, &self.support, &self.row_sums, &self.low_level_eigen]
            .iter()
            .all(|p| matches!(p, PropertyStatus::Pass))
    }
}

/// omega = L_t / (|D| - L_t).
pub fn omega_for(d: &Domain, t: usize) -> Rat {
    let lt = crate::domain::max_link_size(d, t) as i64;
    rat(lt, d.len() as i64 - lt)
}

/// Check the candidate-matrix properties: symmetry, support off
/// t-intersecting pairs, unit row sums, exact eigenvalue -omega on the
/// mean-zero degree-<=t space, and |eigenvalue| < omega beyond level t (the
/// last via a float eigensolver with an explicit margin; boundary cases are
/// flagged inconclusive rather than decided by floats).
pub fn verify_t_good<M: Mask>(
    d: &Domain,
    tables: &Tables<M>,
    cand: &CandidateMatrix,
    eigen_margin: f64,
) -> TGoodReport {
    let n = d.len();
    let a = &cand.entries;
    let t = cand.t;
    let omega = omega_for(d, t);

    let symmetric = {
        let mut status = PropertyStatus::Pass;
        'out: for i in 0..n {
            for j in 0..n {
                if a[(i, j)] != a[(j, i)] {
                    status = PropertyStatus::Fail(format!("A({i},{j}) != A({j},{i})"));
                    break 'out;
                }
            }
        }
        status
    };

    let support = {
        let mut status = PropertyStatus::Pass;
        'out: for i in 0..n {
            for j in 0..n {
                let inter = crate::domain::set_intersection_size(&d.points[i].0, &d.points[j].0);
                if inter >= t && !a[(i, j)].is_zero() {
                    status = PropertyStatus::Fail(format!(
                        "A({i},{j}) != 0 although the points {t}-intersect"
                    ));
                    break 'out;
                }
            }
        }
        status
    };

    let row_sums = {
        let ones = vec![rat(1, 1); n];
        let av = a.mul_vec(&ones);
        match av.iter().position(|v| *v != rat(1, 1)) {
            None => PropertyStatus::Pass,
            Some(i) => PropertyStatus::Fail(format!("row {i} sums to {}", av[i])),
        }
    };

    // exact eigen check on a spanning set of the mean-zero degree-<=t space
    let low_level_eigen = {
        let mut status = PropertyStatus::Pass;
        let card = rat(n as i64, 1);
        'out: for &fi in &tables.span_basis[t.min(tables.span_basis.len() - 1)] {
            let link = &tables.links[fi];
            let size = rat(link.count() as i64, 1);
            let mean = &size / &card;
            let v: Vec<Rat> = (0..n)
                .map(|pi| if link.test(pi) { rat(1, 1) - &mean } else { -mean.clone() })
                .collect();
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            let av = a.mul_vec(&v);
            for i in 0..n {
                if av[i] != -&omega * &v[i] {
                    status = PropertyStatus::Fail(format!(
                        "A v != -omega v on the centred link of face {fi} (row {i})"
                    ));
                    break 'out;
                }
            }
        }
        status
    };

    // float bound on the rest of the spectrum
    let high_level_gap = {
        let basis = &tables.complement_basis[t.min(tables.complement_basis.len() - 1)];
        if basis.is_empty() {
            PropertyStatus::Pass
        } else {
            let mut w: Vec<Vec<f64>> = basis
                .iter()
                .map(|row| row.iter().map(bigint_to_f64).collect::<Vec<f64>>())
                .collect();
            gram_schmidt(&mut w);
            let af: Vec<Vec<f64>> =
                (0..n).map(|i| (0..n).map(|j| rat_to_f64(&a[(i, j)])).collect()).collect();
            let k = w.len();
            let mut small = vec![vec![0.0; k]; k];
            for (bi, wb) in w.iter().enumerate() {
                let awb: Vec<f64> =
                    (0..n).map(|i| (0..n).map(|j| af[i][j] * wb[j]).sum()).collect();
                for (ci, wc) in w.iter().enumerate() {
                    small[ci][bi] = wc.iter().zip(&awb).map(|(x, y)| x * y).sum();
                }
            }
            for i in 0..k {
                for j in i + 1..k {
                    let avg = 0.5 * (small[i][j] + small[j][i]);
                    small[i][j] = avg;
                    small[j][i] = avg;
                }
            }
            let eig = symmetric_eigen(&small, 1e-6).expect("projected matrix is symmetric");
            let omega_f = rat_to_f64(&omega);
            let mut status = PropertyStatus::Pass;
            for &lam in &eig.eigenvalues {
                if lam.abs() >= omega_f + eigen_margin {
                    status = PropertyStatus::Fail(format!(
                        "eigenvalue {lam:.9} has magnitude >= omega = {omega_f:.9}"
                    ));
                    break;
                }
                if lam.abs() > omega_f - eigen_margin {
                    status = PropertyStatus::Inconclusive(format!(
                        "eigenvalue {lam:.9} within margin of omega = {omega_f:.9}"
                    ));
                }
            }
            status
        }
    };

    TGoodReport { symmetric, support, row_sums, low_level_eigen, high_level_gap, omega }
}

fn bigint_to_f64(x: &num_bigint::BigInt) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

fn gram_schmidt(w: &mut Vec<Vec<f64>>) {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in w.iter() {
        let mut v = v.clone();
        for u in &out {
            let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            out.push(v);
        }
    }
    *w = out;
}

/// Exact eigenvalue certification: if entries * v = lambda * v exactly for
/// some rational lambda, return it.
pub fn exact_eigencheck(m: &RatMatrix, v: &[Rat]) -> Option<Rat> {
    let av = m.mul_vec(v);
    let pivot = v.iter().position(|x| !x.is_zero())?;
    let lambda = &av[pivot] / &v[pivot];
    for i in 0..v.len() {
        if av[i] != &lambda * &v[i] {
            return None;
        }
    }
    Some(lambda)
}

#[derive(Clone, Debug)]
pub struct HoffmanReport {
    pub quad_form_zero: bool,
    pub density: Rat,
    pub bound: Rat,
    pub within_bound: bool,
    /// set when density equals the bound: the indicator's degree
    pub equality_degree: Option<usize>,
}

/// Ratio-bound check for a t-intersecting family against a candidate
/// matrix: <f, Af> = 0, density <= omega/(1+omega), and in the equality
/// case deg(f) <= t.
pub fn hoffman_check<M: Mask>(
    d: &Domain,
    tables: &Tables<M>,
    cand: &CandidateMatrix,
    family: &[usize],
) -> Result<HoffmanReport> {
    let t = cand.t;
    for (ai, &x) in family.iter().enumerate() {
        for &y in family.iter().skip(ai + 1) {
            if crate::domain::set_intersection_size(&d.points[x].0, &d.points[y].0) < t {
                return Err(Error::InvalidInput(format!(
                    "family is not {t}-intersecting: points #{x} and #{y}"
                )));
            }
        }
    }
    let n = d.len();
    let mut f = vec![rat_zero(); n];
    for &x in family {
        f[x] = rat(1, 1);
    }
    let af = cand.entries.mul_vec(&f);
    let mut quad = rat_zero();
    for i in 0..n {
        if !f[i].is_zero() {
            quad += &af[i];
        }
    }
    let omega = omega_for(d, t);
    let density = rat(family.len() as i64, n as i64);
    let bound = &omega / (rat(1, 1) + &omega);
    let within = density <= bound;
    let equality_degree = if density == bound && !family.is_empty() {
        let mut mask = M::zero(n);
        for &x in family {
            mask.set(x);
        }
        Some(tables.degree_of_mask(&mask))
    } else {
        None
    };
    Ok(HoffmanReport {
        quad_form_zero: quad.is_zero(),
        density,
        bound,
        within_bound: within,
        equality_degree,
    })
}

/// Cross version: |F| * |G| <= L_t^2, with equality only for F = G of
/// degree <= t.
pub fn hoffman_cross_check<M: Mask>(
    d: &Domain,
    tables: &Tables<M>,
    cand: &CandidateMatrix,
    family_f: &[usize],
    family_g: &[usize],
) -> Result<(bool, Option<(bool, usize)>)> {
    let t = cand.t;
    for &x in family_f {
        for &y in family_g {
            if crate::domain::set_intersection_size(&d.points[x].0, &d.points[y].0) < t {
                return Err(Error::InvalidInput(format!(
                    "families are not cross-{t}-intersecting: #{x}, #{y}"
                )));
            }
        }
    }
    let lt = crate::domain::max_link_size(d, t);
    let product = family_f.len() * family_g.len();
    let within = product <= lt * lt;
    let equality = if product == lt * lt && !family_f.is_empty() {
        let same = {
            let mut a: Vec<usize> = family_f.to_vec();
            let mut b: Vec<usize> = family_g.to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        };
        let mut mask = M::zero(d.len());
        for &x in family_f {
            mask.set(x);
        }
        Some((same, tables.degree_of_mask(&mask)))
    } else {
        None
    };
    Ok((within, equality))
}

#[derive(Clone, Debug)]
pub struct StarLemmaReport {
    pub star_size: usize,
    pub subsets_checked: usize,
    /// sub-families (as masks over the star) whose indicator has degree <= t
    pub low_degree_subsets: Vec<u64>,
    pub pass: bool,
}

/// Subsets of a fixed t-star whose indicator has degree <= t must be empty
/// or the whole star. Exhaustive when the star has <= 20 points, sampled
/// (plus all singletons and co-singletons) otherwise.
pub fn star_lemma_check<M: Mask>(
    spec: &DomainSpec,
    d: &Domain,
    tables: &Tables<M>,
    t: usize,
    seed: u64,
    sample: usize,
) -> Result<StarLemmaReport> {
    let n = match spec {
        DomainSpec::SymmetricGroup(n) => *n,
        _ => return Err(Error::Unsupported("the star check runs on symmetric groups".into())),
    };
    if t >= n {
        return Err(Error::InvalidInput("t must be below the dimension".into()));
    }
    let star_face: Vec<u32> = (1..=t).map(|i| ((i - 1) * n + (i - 1)) as u32).collect();
    let star = crate::domain::link(d, &star_face);
    let k = star.len();
    let mut low: Vec<u64> = Vec::new();
    let mut checked = 0usize;
    let mut test_subset = |bits: u64, low: &mut Vec<u64>, checked: &mut usize| {
        let mut mask = M::zero(d.len());
        for (idx, &pi) in star.iter().enumerate() {
            if bits >> idx & 1 == 1 {
                mask.set(pi);
            }
        }
        *checked += 1;
        if tables.degree_of_mask(&mask) <= t {
            low.push(bits);
        }
    };
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    if k <= 20 {
        for bits in 0..(1u64 << k) {
            test_subset(bits, &mut low, &mut checked);
        }
    } else {
        test_subset(0, &mut low, &mut checked);
        test_subset(full, &mut low, &mut checked);
        for i in 0..k {
            test_subset(1 << i, &mut low, &mut checked);
            test_subset(full ^ (1 << i), &mut low, &mut checked);
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sample {
            test_subset(rng.gen::<u64>() & full, &mut low, &mut checked);
        }
    }
    let pass = low.iter().all(|&b| b == 0 || b == full);
    Ok(StarLemmaReport { star_size: k, subsets_checked: checked, low_degree_subsets: low, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build;

    fn setup(s: &str) -> (DomainSpec, Domain, Tables<u64>) {
        let spec = DomainSpec::parse(s).unwrap();
        let d = build(&spec).unwrap();
        let t = Tables::build(&d);
        (spec, d, t)
    }

    #[test]
    fn column_variant_counts() {
        // shape (3,2): columns of depth 2,2,1 -> 4 signed variants
        let t = Tabloid::new(vec![vec![1, 2, 3], vec![4, 5]]);
        assert_eq!(column_variants(&t).len(), 4);
        let t = Tabloid::new(vec![vec![1, 2, 3]]);
        assert_eq!(column_variants(&t).len(), 1);
    }

    #[test]
    fn trivial_character_is_constant_one() {
        let (spec, d, _t) = setup("sym:3");
        let a = Tabloid::new(vec![vec![1, 2, 3]]);
        assert!(a.is_standard_content(3));
        let c = make_character(CharKind::SymPair { a: a.clone(), b: a }, &d, &spec).unwrap();
        assert!(c.values.iter().all(|&v| v == 1));
        assert_eq!(c.degree, 0);
    }

    #[test]
    fn family_counts_on_sym3() {
        let (spec, d, _t) = setup("sym:3");
        let fam0 = pseudo_char_family(&spec, &d, 0).unwrap();
        assert_eq!(fam0.len(), 1);
        let fam1 = pseudo_char_family(&spec, &d, 1).unwrap();
        assert!(fam1.len() > 1);
        assert!(fam1.iter().all(|c| c.degree <= 1));
    }

    #[test]
    fn spanning_ranks_match_span_dims() {
        for s in ["sym:3", "pm:3,2", "ms:2,2"] {
            let (spec, d, t) = setup(s);
            for deg in 0..=d.dimension.min(3) {
                let fam = pseudo_char_family(&spec, &d, deg).unwrap();
                assert!(spanning_rank_matches(&fam, &t, deg), "{s} at level {deg}");
            }
        }
    }

    #[test]
    fn rejects_unsupported_kinds() {
        let (spec, d, _t) = setup("pm:2,3");
        assert!(pseudo_char_family(&spec, &d, 1).is_err());
        let (spec, d, _t) = setup("cube:3");
        assert!(pseudo_char_family(&spec, &d, 1).is_err());
    }

    #[test]
    fn inducing_verification_on_small_families() {
        for s in ["sym:3", "sym:4", "pm:3,2", "ms:2,2", "ms:2,3"] {
            let (spec, d, t) = setup(s);
            let deg_cap = if s.starts_with("pm") { d.dimension - 1 } else { d.dimension };
            let fam = pseudo_char_family(&spec, &d, deg_cap).unwrap();
            assert!(!fam.is_empty());
            for c in &fam {
                verify_inducing(&spec, &d, &t, c).unwrap_or_else(|e| {
                    panic!("{s}: character of shape {:?} failed: {e}", c.shape)
                });
            }
        }
    }

    #[test]
    fn inducing_examples() {
        // S_4 shape (2,2): two columns of depth 2
        let (spec, d, t) = setup("sym:4");
        let fam = pseudo_char_family(&spec, &d, 2).unwrap();
        let c = fam.iter().find(|c| c.shape == vec![2, 2]).unwrap();
        let w = verify_inducing(&spec, &d, &t, c).unwrap();
        assert_eq!(w.d_prime, 2);

        // trivial character: whole domain, no moves
        let triv = fam.iter().find(|c| c.degree == 0).unwrap();
        let w = verify_inducing(&spec, &d, &t, triv).unwrap();
        assert_eq!(w.d_prime, 0);
        assert_eq!(w.parts.len(), d.len());

        // pm shape (2,2,2): columns of depth 3 give >= 2 pairs
        let (spec, d, t) = setup("pm:3,2");
        let fam = pseudo_char_family(&spec, &d, 2).unwrap();
        let c = fam.iter().find(|c| c.shape == vec![2, 2, 2]).unwrap();
        let w = verify_inducing(&spec, &d, &t, c).unwrap();
        assert!(w.d_prime >= 2);
    }

    #[test]
    fn degree_witness_exists_and_bounds_sensitivity() {
        let (spec, d, t) = setup("sym:3");
        for f in [0b000001u64, 0b010101, 0b101010, 0b001111] {
            let (c, corr) = degree_witness(&spec, &d, &t, &f).unwrap();
            assert_ne!(corr, 0);
            assert_eq!(c.degree, t.degree_of_mask(&f));
            let w = verify_inducing(&spec, &d, &t, &c).unwrap();
            let s = measures::sensitivity(&d, &t, &f);
            assert!(s * s >= w.d_prime);
        }
    }

    #[test]
    fn derangement_matrix_profile_on_sym4() {
        let (_spec, d, t) = setup("sym:4");
        let cand = derangement_matrix(&d, 1).unwrap();
        assert_eq!(omega_for(&d, 1), rat(1, 3)); // 6 / (24 - 6)
        let report = verify_t_good(&d, &t, &cand, 1e-6);
        assert_eq!(report.symmetric, PropertyStatus::Pass);
        assert_eq!(report.support, PropertyStatus::Pass);
        assert_eq!(report.row_sums, PropertyStatus::Pass);
        assert_eq!(report.low_level_eigen, PropertyStatus::Pass);
        // the sign character sits exactly at the +-omega boundary
        assert!(!matches!(report.high_level_gap, PropertyStatus::Pass));
        // exact certification: the sign vector has eigenvalue (3-6)/9 = -1/3
        let sign: Vec<Rat> = d
            .points
            .iter()
            .map(|p| {
                let perm = point_to_perm(4, p);
                let mut inv = 0;
                for a in 0..4 {
                    for b in a + 1..4 {
                        if perm[a] > perm[b] {
                            inv += 1;
                        }
                    }
                }
                if inv % 2 == 0 {
                    rat(1, 1)
                } else {
                    rat(-1, 1)
                }
            })
            .collect();
        let lambda = exact_eigencheck(&cand.entries, &sign).unwrap();
        assert_eq!(lambda, rat(-1, 3));
    }

    #[test]
    fn broken_matrix_fails_support() {
        let (_spec, d, t) = setup("sym:3");
        let n = d.len();
        let cand = CandidateMatrix { t: 1, entries: RatMatrix::identity(n) };
        let report = verify_t_good(&d, &t, &cand, 1e-6);
        assert!(matches!(report.support, PropertyStatus::Fail(_)));
    }

    #[test]
    fn hoffman_star_meets_bound_with_degree_one() {
        let (_spec, d, t) = setup("sym:4");
        let cand = derangement_matrix(&d, 1).unwrap();
        let e = d.universe.id_of("(1,1)").unwrap();
        let star: Vec<usize> = (0..d.len()).filter(|&pi| d.point_has(pi, e)).collect();
        let rep = hoffman_check(&d, &t, &cand, &star).unwrap();
        assert!(rep.quad_form_zero);
        assert_eq!(rep.density, rat(1, 4)); // 6/24 = omega/(1+omega)
        assert_eq!(rep.density, rep.bound);
        assert_eq!(rep.equality_degree, Some(1));

        let rep = hoffman_check(&d, &t, &cand, &[]).unwrap();
        assert!(rep.within_bound && rep.quad_form_zero);

        let (within, eq) = hoffman_cross_check(&d, &t, &cand, &star, &star).unwrap();
        assert!(within);
        let (same, deg) = eq.unwrap();
        assert!(same);
        assert_eq!(deg, 1);

        assert!(hoffman_check(&d, &t, &cand, &[0, d.len() - 1]).is_err());
    }

    #[test]
    fn star_subsets_of_low_degree_are_trivial() {
        let (spec, d, t) = setup("sym:4");
        let rep = star_lemma_check(&spec, &d, &t, 1, 0, 0).unwrap();
        assert_eq!(rep.star_size, 6);
        assert_eq!(rep.subsets_checked, 64);
        assert!(rep.pass);
        assert_eq!(rep.low_degree_subsets.len(), 2); // empty and full only
    }
}
