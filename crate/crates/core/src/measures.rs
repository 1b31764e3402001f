//! Complexity measures of Boolean functions on a domain, all exact:
//! degree, approximate degree, certificate complexity, unambiguous
//! certificate complexity, decision tree depth, sensitivity, block
//! sensitivity, fractional block sensitivity, plus the certificate-driven
//! query algorithm, minimal-block shrinking, greedy closer-point search and
//! ball reconstruction.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::bitset::Mask;
use crate::catalog::DomainSpec;
use crate::domain::{self, Domain, ElemId};
use crate::error::{Error, Result};
use crate::numerics::lp::{lp_solve, LinearProgram, LpOutcome, Rel};
use crate::numerics::rat::{rat, rat_zero, Rat};
use crate::tables::Tables;

/// A Boolean function as a bit vector in canonical point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanFunction {
    pub values: Vec<bool>,
}

impl BooleanFunction {
    pub fn from_bit_string(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidInput(format!("bad bit `{c}`"))),
            })
            .collect::<Result<_>>()?;
        Ok(BooleanFunction { values })
    }

    pub fn to_bit_string(&self) -> String {
        self.values.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn to_mask<M: Mask>(&self) -> M {
        let mut m = M::zero(self.values.len());
        for (i, &b) in self.values.iter().enumerate() {
            if b {
                m.set(i);
            }
        }
        m
    }

    pub fn from_mask<M: Mask>(m: &M, len: usize) -> Self {
        BooleanFunction { values: (0..len).map(|i| m.test(i)).collect() }
    }
}

/// A value-forcing face of a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub owner: usize,
    pub members: Vec<ElemId>,
    pub value: bool,
}

/// Query-labelled decision tree; edges carry universe elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(bool),
    Node { query: usize, children: Vec<(ElemId, DecisionTree)> },
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Node { children, .. } => {
                1 + children.iter().map(|(_, c)| c.depth()).max().unwrap_or(0)
            }
        }
    }

    /// Evaluate on a point (panics if the tree was built for another domain).
    pub fn eval(&self, d: &Domain, pi: usize) -> bool {
        match self {
            DecisionTree::Leaf(b) => *b,
            DecisionTree::Node { query, children } => {
                let q = &d.queries[*query];
                let ans = q
                    .0
                    .iter()
                    .copied()
                    .find(|&e| d.point_has(pi, e))
                    .expect("query meets every point");
                let child = children
                    .iter()
                    .find(|(e, _)| *e == ans)
                    .map(|(_, c)| c)
                    .expect("feasible answer has a child");
                child.eval(d, pi)
            }
        }
    }

    /// True iff the tree computes `f` on every point.
    pub fn replays<M: Mask>(&self, d: &Domain, f: &M) -> bool {
        (0..d.len()).all(|pi| self.eval(d, pi) == f.test(pi))
    }

    /// Nested-JSON form: query label plus answer-label -> subtree, or a leaf bit.
    pub fn to_json(&self, d: &Domain) -> serde_json::Value {
        match self {
            DecisionTree::Leaf(b) => serde_json::json!({ "leaf": *b as u8 }),
            DecisionTree::Node { query, children } => {
                let mut map = serde_json::Map::new();
                for (e, c) in children {
                    map.insert(d.universe.labels[*e as usize].clone(), c.to_json(d));
                }
                serde_json::json!({
                    "query": d.query_labels[*query],
                    "children": serde_json::Value::Object(map),
                })
            }
        }
    }
}

/// Exact value or a certified bracket from a truncated search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UValue {
    Exact(usize),
    Bracket { lo: usize, hi: usize },
}

impl UValue {
    pub fn lo(&self) -> usize {
        match *self {
            UValue::Exact(k) => k,
            UValue::Bracket { lo, .. } => lo,
        }
    }
    pub fn hi(&self) -> usize {
        match *self {
            UValue::Exact(k) => k,
            UValue::Bracket { hi, .. } => hi,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureReport {
    pub deg: usize,
    /// epsilon used for the approximate degree, as an exact rational string
    pub adeg_eps: String,
    pub adeg: usize,
    pub c: usize,
    pub c0: usize,
    pub c1: usize,
    pub u: UValue,
    pub d: usize,
    pub s: usize,
    pub bs: usize,
    /// fractional block sensitivity, exact rational string
    pub fbs: String,
    /// only for symmetric-group domains
    pub edge_sensitivity: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct MeasureOptions {
    pub eps: Rat,
    pub u_budget: u64,
    pub compute_u: bool,
    pub compute_adeg: bool,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions { eps: rat(1, 3), u_budget: 50_000_000, compute_u: true, compute_adeg: true }
    }
}

// ---------------------------------------------------------------------------
// degree and approximate degree

pub fn degree<M: Mask>(t: &Tables<M>, f: &M) -> usize {
    t.degree_of_mask(f)
}

/// Exact minimax error of the best degree-<=d approximation.
pub fn chebyshev_error<M: Mask>(t: &Tables<M>, f: &M, d: usize) -> Rat {
    let basis = &t.span_basis[d.min(t.span_basis.len() - 1)];
    let k = basis.len();
    let n = t.n_points;
    // minimize eps subject to |f(x) - sum_j t_j B_j(x)| <= eps
    let mut objective = vec![rat_zero(); k + 1];
    objective[k] = rat(1, 1);
    let mut p = LinearProgram::new(false, objective);
    for j in 0..k {
        p.set_bounds(j, None, None);
    }
    for pi in 0..n {
        let fx = if f.test(pi) { rat(1, 1) } else { rat_zero() };
        let mut row = vec![rat_zero(); k + 1];
        for (j, &fi) in basis.iter().enumerate() {
            if t.links[fi].test(pi) {
                row[j] = rat(1, 1);
            }
        }
        row[k] = rat(-1, 1);
        p.constrain(row.clone(), Rel::Le, fx.clone());
        for cell in row.iter_mut().take(k) {
            *cell = -cell.clone();
        }
        p.constrain(row, Rel::Le, -fx);
    }
    match lp_solve(&p) {
        LpOutcome::Optimal(sol) => sol.objective_value,
        _ => unreachable!("chebyshev program is feasible and bounded"),
    }
}

/// Smallest d such that some degree-<=d polynomial is uniformly within eps.
pub fn approx_degree<M: Mask>(t: &Tables<M>, f: &M, eps: &Rat) -> usize {
    let deg = degree(t, f);
    let mut last_dim = usize::MAX;
    for d in 0..=deg {
        if t.span_dim[d] == last_dim {
            continue; // same space, same optimum
        }
        last_dim = t.span_dim[d];
        if chebyshev_error(t, f, d) <= *eps {
            return d;
        }
    }
    deg
}

// ---------------------------------------------------------------------------
// certificates

/// Per-point minimum certificate (smallest size, then lexicographic).
pub fn certificates<M: Mask>(t: &Tables<M>, f: &M) -> Vec<Certificate> {
    let (ones, zeros) = t.split_mask(f);
    (0..t.n_points)
        .map(|pi| {
            let value = f.test(pi);
            let side = if value { &ones } else { &zeros };
            for &fi in &t.point_subfaces[pi] {
                if t.links[fi].is_subset_of(side) {
                    return Certificate { owner: pi, members: t.faces[fi].clone(), value };
                }
            }
            unreachable!("the full point certifies its own value")
        })
        .collect()
}

/// (C, C_0, C_1) plus the per-point witnesses.
pub fn certificate_complexity<M: Mask>(
    t: &Tables<M>,
    f: &M,
) -> (usize, usize, usize, Vec<Certificate>) {
    let certs = certificates(t, f);
    let mut c0 = 0;
    let mut c1 = 0;
    for c in &certs {
        if c.value {
            c1 = c1.max(c.members.len());
        } else {
            c0 = c0.max(c.members.len());
        }
    }
    (c0.max(c1), c0, c1, certs)
}

// ---------------------------------------------------------------------------
// unambiguous certificate complexity: exact cover by monochromatic links

pub fn unambiguous_certificate_complexity<M: Mask>(
    t: &Tables<M>,
    f: &M,
    lower: usize,
    upper: usize,
    budget: u64,
) -> UValue {
    let (ones, zeros) = t.split_mask(f);
    for k in lower..=upper {
        let mut nodes = 0u64;
        let mut failed: HashSet<M> = HashSet::new();
        let full = M::full(t.n_points);
        match cover_search(t, &ones, &zeros, &full, k, &mut nodes, budget, &mut failed) {
            Some(true) => return UValue::Exact(k),
            Some(false) => continue,
            None => return UValue::Bracket { lo: k, hi: upper },
        }
    }
    UValue::Exact(upper)
}

/// Some(true)=cover exists, Some(false)=no cover, None=budget exhausted.
#[allow(clippy::too_many_arguments)]
fn cover_search<M: Mask>(
    t: &Tables<M>,
    ones: &M,
    zeros: &M,
    uncovered: &M,
    k: usize,
    nodes: &mut u64,
    budget: u64,
    failed: &mut HashSet<M>,
) -> Option<bool> {
    let Some(pi) = uncovered.first_one() else {
        return Some(true);
    };
    if failed.contains(uncovered) {
        return Some(false);
    }
    *nodes += 1;
    if *nodes > budget {
        return None;
    }
    for &fi in &t.point_subfaces[pi] {
        if t.faces[fi].len() > k {
            continue;
        }
        let link = &t.links[fi];
        if !link.is_subset_of(uncovered) {
            continue;
        }
        if !(link.is_subset_of(ones) || link.is_subset_of(zeros)) {
            continue;
        }
        let rest = uncovered.minus(link);
        match cover_search(t, ones, zeros, &rest, k, nodes, budget, failed) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => return None,
        }
    }
    failed.insert(uncovered.clone());
    Some(false)
}

// ---------------------------------------------------------------------------
// decision tree complexity: memoized minimax over consistent point sets

pub fn decision_tree_complexity<M: Mask>(
    d: &Domain,
    t: &Tables<M>,
    f: &M,
) -> (usize, DecisionTree) {
    let mut memo: HashMap<M, u8> = HashMap::new();
    let full = M::full(t.n_points);
    let depth = dt_depth(d, t, f, &full, &mut memo);
    let tree = dt_build(d, t, f, &full, &mut memo);
    (depth as usize, tree)
}

fn state_is_mono<M: Mask>(t: &Tables<M>, f: &M, state: &M) -> Option<bool> {
    let (ones, zeros) = t.split_mask(f);
    if state.is_subset_of(&ones) {
        Some(true)
    } else if state.is_subset_of(&zeros) {
        Some(false)
    } else {
        None
    }
}

/// Children of `state` under query `q`: (answer element, sub-state), only
/// for feasible answers containing at least one consistent point.
fn query_children<M: Mask>(d: &Domain, t: &Tables<M>, state: &M, q: usize) -> Vec<(ElemId, M)> {
    let mut out = Vec::new();
    for &e in &d.queries[q].0 {
        let sub = state.and(&t.elem_links[e as usize]);
        if !sub.is_empty() {
            out.push((e, sub));
        }
    }
    out
}

fn dt_depth<M: Mask>(d: &Domain, t: &Tables<M>, f: &M, state: &M, memo: &mut HashMap<M, u8>) -> u8 {
    if state_is_mono(t, f, state).is_some() {
        return 0;
    }
    if let Some(&v) = memo.get(state) {
        return v;
    }
    let mut best = u8::MAX;
    for q in 0..d.queries.len() {
        let children = query_children(d, t, state, q);
        if children.len() < 2 {
            continue; // no information gained
        }
        let mut worst = 0u8;
        for (_, sub) in &children {
            let v = dt_depth(d, t, f, sub, memo);
            worst = worst.max(v);
            if worst.saturating_add(1) >= best {
                break;
            }
        }
        best = best.min(worst.saturating_add(1));
        if best == 1 {
            break;
        }
    }
    debug_assert!(best < u8::MAX, "some query must split a non-mono state");
    memo.insert(state.clone(), best);
    best
}

fn dt_build<M: Mask>(
    d: &Domain,
    t: &Tables<M>,
    f: &M,
    state: &M,
    memo: &mut HashMap<M, u8>,
) -> DecisionTree {
    if let Some(b) = state_is_mono(t, f, state) {
        return DecisionTree::Leaf(b);
    }
    let target = dt_depth(d, t, f, state, memo);
    for q in 0..d.queries.len() {
        let children = query_children(d, t, state, q);
        if children.len() < 2 {
            continue;
        }
        let worst = children
            .iter()
            .map(|(_, sub)| dt_depth(d, t, f, sub, memo))
            .max()
            .unwrap();
        if worst + 1 == target {
            let built: Vec<(ElemId, DecisionTree)> =
                children.into_iter().map(|(e, sub)| (e, dt_build(d, t, f, &sub, memo))).collect();
            return DecisionTree::Node { query: q, children: built };
        }
    }
    unreachable!("memoized depth must be attained by some query")
}

// ---------------------------------------------------------------------------
// sensitivity, block sensitivity, edge sensitivity

/// Max packing of pairwise-disjoint nonempty blocks, each a subset of an
/// n-element ground set given as bit masks.
fn max_packing(blocks: &[u32], n: usize) -> usize {
    if blocks.is_empty() {
        return 0;
    }
    debug_assert!(n <= 20);
    let mut g = vec![0u8; 1 << n];
    for s in 1usize..(1 << n) {
        let mut best = g[s & (s - 1)]; // dropping one element never hurts
        for &b in blocks {
            let b = b as usize;
            if b & !s == 0 {
                best = best.max(1 + g[s & !b]);
            }
        }
        g[s] = best;
    }
    g[(1 << n) - 1] as usize
}

/// Blocks x\y as local masks over x's elements, for candidate points `ys`.
fn local_blocks(d: &Domain, xi: usize, ys: impl Iterator<Item = usize>) -> Vec<u32> {
    let x = &d.points[xi].0;
    let mut set: HashSet<u32> = HashSet::new();
    for yi in ys {
        let mut mask = 0u32;
        for (k, &e) in x.iter().enumerate() {
            if !d.point_has(yi, e) {
                mask |= 1 << k;
            }
        }
        if mask != 0 {
            set.insert(mask);
        }
    }
    let mut v: Vec<u32> = set.into_iter().collect();
    v.sort_unstable();
    v
}

/// s(f, x): max family of value-flipping chunk-neighbours with disjoint
/// difference blocks.
pub fn sensitivity_at<M: Mask>(d: &Domain, t: &Tables<M>, f: &M, xi: usize) -> usize {
    let fx = f.test(xi);
    let flips = t.chunk_neighbors[xi].iter().copied().filter(|&yi| f.test(yi) != fx);
    let blocks = local_blocks(d, xi, flips);
    max_packing(&blocks, d.dimension)
}

pub fn sensitivity<M: Mask>(d: &Domain, t: &Tables<M>, f: &M) -> usize {
    (0..t.n_points).map(|xi| sensitivity_at(d, t, f, xi)).max().unwrap_or(0)
}

/// bs(f, x); `minimal_only` restricts to inclusion-minimal blocks (the
/// default; the unrestricted variant exists for cross-validation).
pub fn block_sensitivity_at<M: Mask>(
    d: &Domain,
    t: &Tables<M>,
    f: &M,
    xi: usize,
    minimal_only: bool,
) -> usize {
    let fx = f.test(xi);
    let flips = (0..t.n_points).filter(|&yi| yi != xi && f.test(yi) != fx);
    let mut blocks = local_blocks(d, xi, flips);
    if minimal_only {
        blocks = blocks
            .iter()
            .copied()
            .filter(|&b| !blocks.iter().any(|&o| o != b && o & !b == 0))
            .collect();
    }
    max_packing(&blocks, d.dimension)
}

pub fn block_sensitivity<M: Mask>(d: &Domain, t: &Tables<M>, f: &M, minimal_only: bool) -> usize {
    (0..t.n_points)
        .map(|xi| block_sensitivity_at(d, t, f, xi, minimal_only))
        .max()
        .unwrap_or(0)
}

/// Number of value-flipping chunk-neighbours, no disjointness requirement.
pub fn flip_count_at<M: Mask>(t: &Tables<M>, f: &M, xi: usize) -> usize {
    let fx = f.test(xi);
    t.chunk_neighbors[xi].iter().filter(|&&yi| f.test(yi) != fx).count()
}

/// Edge sensitivity t(f) = max_x #{transpositions flipping the value}.
/// Only defined on symmetric-group domains, where chunk-neighbours and
/// transposition moves coincide.
pub fn edge_sensitivity<M: Mask>(spec: &DomainSpec, t: &Tables<M>, f: &M) -> Result<usize> {
    let sym = matches!(spec, DomainSpec::SymmetricGroup(_))
        || matches!(spec, DomainSpec::PerfectMatching { parts, .. } if parts == &[1, 1]);
    if !sym {
        return Err(Error::Unsupported(
            "edge sensitivity is defined for symmetric-group domains".into(),
        ));
    }
    Ok((0..t.n_points).map(|xi| flip_count_at(t, f, xi)).max().unwrap_or(0))
}

// ---------------------------------------------------------------------------
// fractional block sensitivity

/// fbs(f, x) by the primal packing LP and its certificate dual; returns
/// (primal optimum, dual optimum). Callers assert the two agree.
pub fn fractional_bs_at<M: Mask>(d: &Domain, t: &Tables<M>, f: &M, xi: usize) -> (Rat, Rat) {
    let fx = f.test(xi);
    let n = d.dimension;
    // distinct blocks x\y over flipping y (identical columns merge)
    let flips = (0..t.n_points).filter(|&yi| yi != xi && f.test(yi) != fx);
    let blocks = local_blocks(d, xi, flips);
    if blocks.is_empty() {
        return (rat_zero(), rat_zero());
    }

    // primal: maximize sum c_b, sum_{b : k in b} c_b <= 1 for all k, 0<=c<=1
    let mut p = LinearProgram::new(true, vec![rat(1, 1); blocks.len()]);
    for j in 0..blocks.len() {
        p.set_bounds(j, Some(rat_zero()), Some(rat(1, 1)));
    }
    for k in 0..n {
        let row: Vec<Rat> = blocks
            .iter()
            .map(|&b| if b >> k & 1 == 1 { rat(1, 1) } else { rat_zero() })
            .collect();
        p.constrain(row, Rel::Le, rat(1, 1));
    }
    let LpOutcome::Optimal(primal) = lp_solve(&p) else {
        unreachable!("packing LP is feasible and bounded")
    };

    // dual: minimize sum d_k, sum_{k in b} d_k >= 1 for all blocks, 0<=d<=1
    let mut q = LinearProgram::new(false, vec![rat(1, 1); n]);
    for k in 0..n {
        q.set_bounds(k, Some(rat_zero()), Some(rat(1, 1)));
    }
    for &b in &blocks {
        let row: Vec<Rat> =
            (0..n).map(|k| if b >> k & 1 == 1 { rat(1, 1) } else { rat_zero() }).collect();
        q.constrain(row, Rel::Ge, rat(1, 1));
    }
    let LpOutcome::Optimal(dual) = lp_solve(&q) else {
        unreachable!("certificate LP is feasible and bounded")
    };
    (primal.objective_value, dual.objective_value)
}

/// fbs(f) = max over points; asserts primal = dual on every instance.
pub fn fractional_bs<M: Mask>(d: &Domain, t: &Tables<M>, f: &M) -> Rat {
    let mut best = rat_zero();
    for xi in 0..t.n_points {
        let (p, dual) = fractional_bs_at(d, t, f, xi);
        assert_eq!(p, dual, "LP duality must be exact");
        if p > best {
            best = p;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// certificate-driven query algorithm

/// Builds a correct tree of depth <= max_degree * C_0 * C_1 by repeatedly
/// querying around a non-conflicting 1-certificate. Requires C(f) <= lambda.
pub fn algorithm1_tree<M: Mask>(
    d: &Domain,
    t: &Tables<M>,
    f: &M,
    lambda: usize,
) -> Result<DecisionTree> {
    let (c, c0, _c1, certs) = certificate_complexity(t, f);
    if c > lambda {
        return Err(Error::InvalidInput(format!(
            "certificate complexity {c} exceeds the conflict bound {lambda}"
        )));
    }
    let (ones, zeros) = t.split_mask(f);
    if let Some(b) = state_is_mono(t, f, &M::full(t.n_points)) {
        return Ok(DecisionTree::Leaf(b));
    }
    // 1-certificates, lexicographically smallest first
    let mut one_certs: Vec<Vec<ElemId>> =
        certs.iter().filter(|c| c.value).map(|c| c.members.clone()).collect();
    one_certs.sort();
    one_certs.dedup();
    let full = M::full(t.n_points);
    build_alg1(d, t, &ones, &zeros, &one_certs, &full, 0, c0)
}

#[allow(clippy::too_many_arguments)]
fn build_alg1<M: Mask>(
    d: &Domain,
    t: &Tables<M>,
    ones: &M,
    zeros: &M,
    one_certs: &[Vec<ElemId>],
    state: &M,
    iteration: usize,
    c0: usize,
) -> Result<DecisionTree> {
    if state.is_subset_of(ones) {
        return Ok(DecisionTree::Leaf(true));
    }
    if state.is_subset_of(zeros) {
        return Ok(DecisionTree::Leaf(false));
    }
    if iteration > c0.max(1) {
        return Err(Error::InvalidInput("query algorithm exceeded its iteration bound".into()));
    }
    // lexicographically smallest 1-certificate not conflicting with the
    // current knowledge (= consistent with at least one live point)
    let cert = one_certs.iter().find(|c| {
        let mut m = state.clone();
        for &e in c.iter() {
            m = m.and(&t.elem_links[e as usize]);
        }
        !m.is_empty()
    });
    let Some(cert) = cert else {
        unreachable!("non-mono state admits a compatible 1-certificate")
    };
    // all queries touching the certificate, in index order
    let queries: Vec<usize> = (0..d.queries.len())
        .filter(|&q| d.queries[q].0.iter().any(|e| cert.contains(e)))
        .collect();
    ask_queries(d, t, ones, zeros, one_certs, state, &queries, 0, iteration, c0)
}

#[allow(clippy::too_many_arguments)]
fn ask_queries<M: Mask>(
    d: &Domain,
    t: &Tables<M>,
    ones: &M,
    zeros: &M,
    one_certs: &[Vec<ElemId>],
    state: &M,
    queries: &[usize],
    qi: usize,
    iteration: usize,
    c0: usize,
) -> Result<DecisionTree> {
    if qi == queries.len() {
        return build_alg1(d, t, ones, zeros, one_certs, state, iteration + 1, c0);
    }
    let q = queries[qi];
    let children = query_children(d, t, state, q);
    let mut built = Vec::with_capacity(children.len());
    for (e, sub) in children {
        let subtree =
            ask_queries(d, t, ones, zeros, one_certs, &sub, queries, qi + 1, iteration, c0)?;
        built.push((e, subtree));
    }
    Ok(DecisionTree::Node { query: q, children: built })
}

// ---------------------------------------------------------------------------
// minimal blocks, closer points, ball reconstruction

/// The point z with f(z)=f(y), x\z inside x\y, minimizing |x\z|.
pub fn minimal_block<M: Mask>(
    d: &Domain,
    t: &Tables<M>,
    f: &M,
    xi: usize,
    yi: usize,
) -> Result<usize> {
    if f.test(xi) == f.test(yi) {
        return Err(Error::InvalidInput("minimal block needs f(x) != f(y)".into()));
    }
    let x = &d.points[xi].0;
    let y = &d.points[yi].0;
    let xy: Vec<ElemId> = domain::set_difference(x, y);
    let fy = f.test(yi);
    let mut best: Option<(usize, usize)> = None; // (size, point)
    for zi in 0..t.n_points {
        if f.test(zi) != fy {
            continue;
        }
        let xz = domain::set_difference(x, &d.points[zi].0);
        if !xz.iter().all(|e| xy.contains(e)) {
            continue;
        }
        let candidate = (xz.len(), zi);
        if best.map_or(true, |b| candidate < b) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("y itself is a candidate").1)
}

/// A membership oracle over indicator element-sets.
pub trait MembershipOracle {
    fn is_point(&self, elems: &[ElemId]) -> bool;
}

impl<F: Fn(&[ElemId]) -> bool> MembershipOracle for F {
    fn is_point(&self, elems: &[ElemId]) -> bool {
        self(elems)
    }
}

/// Greedy closer-point search: points z at distance chunk from y with
/// d(x,z) < d(x,y) and pairwise-disjoint y\z, in deterministic order.
pub fn find_closer_points<M: Mask>(
    d: &Domain,
    t: &Tables<M>,
    oracle: &dyn MembershipOracle,
    xi: usize,
    yi: usize,
) -> Vec<usize> {
    let x = &d.points[xi].0;
    let y = &d.points[yi].0;
    let dxy = t.dist[xi][yi] as usize;
    let chunk = t.chunk;
    let universe: Vec<ElemId> =
        (0..d.universe.size() as ElemId).filter(|e| !y.contains(e)).collect();
    let mut accepted: Vec<usize> = Vec::new();
    let mut used: HashSet<ElemId> = HashSet::new();
    // candidates in lexicographic order of (removed subset, added subset)
    for removal in k_subsets(y, chunk) {
        if removal.iter().any(|e| used.contains(e)) {
            continue;
        }
        for addition in k_subsets(&universe, chunk) {
            let mut w: Vec<ElemId> = y.iter().copied().filter(|e| !removal.contains(e)).collect();
            w.extend(addition.iter().copied());
            w.sort_unstable();
            if !oracle.is_point(&w) {
                continue;
            }
            if domain::set_difference_size(x, &w) >= dxy {
                continue;
            }
            let wi = d.point_index(&domain::Point(w)).expect("oracle accepted a point");
            accepted.push(wi);
            used.extend(removal.iter().copied());
            break;
        }
    }
    accepted
}

fn k_subsets(pool: &[ElemId], k: usize) -> Vec<Vec<ElemId>> {
    let mut out = Vec::new();
    fn rec(
        pool: &[ElemId],
        start: usize,
        k: usize,
        cur: &mut Vec<ElemId>,
        out: &mut Vec<Vec<ElemId>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            rec(pool, i + 1, k, cur, out);
            cur.pop();
        }
    }
    rec(pool, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Reconstruct a sensitivity-<=s function from its values on a ball.
///
/// `known` gives the true values on `ball(x0, radius)`; values outside are
/// rebuilt outward by majority over 2s+1 closer points.
pub fn ball_reconstruct<M: Mask>(
    d: &Domain,
    t: &Tables<M>,
    oracle: &dyn MembershipOracle,
    x0: usize,
    s: usize,
    radius: usize,
    known: &dyn Fn(usize) -> bool,
) -> Result<BooleanFunction> {
    let n = t.n_points;
    let mut values: Vec<Option<bool>> = vec![None; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&pi| t.dist[x0][pi]);
    for &pi in &order {
        let dist = t.dist[x0][pi] as usize;
        if dist <= radius {
            values[pi] = Some(known(pi));
            continue;
        }
        let closer = find_closer_points(d, t, oracle, x0, pi);
        let need = 2 * s + 1;
        if closer.len() < need {
            return Err(Error::ReconstructionFailure {
                point: format!("point #{pi}"),
                needed: need,
                found: closer.len(),
            });
        }
        let votes = closer[..need]
            .iter()
            .map(|&zi| values[zi].expect("closer points are already assigned"))
            .filter(|&b| b)
            .count();
        values[pi] = Some(votes > need / 2);
    }
    Ok(BooleanFunction { values: values.into_iter().map(|v| v.unwrap()).collect() })
}

/// Reconstruction radius guaranteed with the greedy closer-point search.
pub fn greedy_radius(sens_ratio_lb: &Rat, chunk: usize, s: usize) -> usize {
    let num = rat((chunk * (2 * s + 1)) as i64, 1) / sens_ratio_lb;
    num.ceil().to_integer().try_into().unwrap_or(usize::MAX)
}

/// Tighter radius available when domain-specific witnesses exist.
pub fn witness_radius(sens_ratio_lb: &Rat, s: usize) -> usize {
    let num = rat((2 * s + 1) as i64, 1) / sens_ratio_lb;
    num.ceil().to_integer().try_into().unwrap_or(usize::MAX)
}

// ---------------------------------------------------------------------------
// full report

pub fn measure_report<M: Mask>(
    d: &Domain,
    t: &Tables<M>,
    spec: Option<&DomainSpec>,
    f: &M,
    opts: &MeasureOptions,
) -> MeasureReport {
    let deg = degree(t, f);
    let adeg = if opts.compute_adeg { approx_degree(t, f, &opts.eps) } else { deg };
    let (c, c0, c1, _) = certificate_complexity(t, f);
    let (dt, _) = decision_tree_complexity(d, t, f);
    let u = if opts.compute_u {
        unambiguous_certificate_complexity(t, f, c, dt, opts.u_budget)
    } else {
        UValue::Bracket { lo: c, hi: dt }
    };
    let s = sensitivity(d, t, f);
    let bs = block_sensitivity(d, t, f, true);
    let fbs = fractional_bs(d, t, f);
    let edge = spec.and_then(|sp| edge_sensitivity(sp, t, f).ok());
    MeasureReport {
        deg,
        adeg_eps: crate::numerics::rat::format_rat(&opts.eps),
        adeg,
        c,
        c0,
        c1,
        u,
        d: dt,
        s,
        bs,
        fbs: crate::numerics::rat::format_rat(&fbs),
        edge_sensitivity: edge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, membership, DomainSpec};
    use crate::numerics::rat::rat_zero;

    fn setup(spec: &str) -> (DomainSpec, Domain, Tables<u64>) {
        let spec = DomainSpec::parse(spec).unwrap();
        let d = build(&spec).unwrap();
        let t = Tables::build(&d);
        (spec, d, t)
    }

    fn parity_mask(d: &Domain) -> u64 {
        let mut m = 0u64;
        for (pi, p) in d.points.iter().enumerate() {
            let ones =
                p.0.iter().filter(|&&e| d.universe.labels[e as usize].ends_with(",1)")).count();
            if ones % 2 == 1 {
                m |= 1 << pi;
            }
        }
        m
    }

    fn or_mask(d: &Domain) -> u64 {
        let mut m = 0u64;
        for (pi, p) in d.points.iter().enumerate() {
            let ones =
                p.0.iter().filter(|&&e| d.universe.labels[e as usize].ends_with(",1)")).count();
            if ones > 0 {
                m |= 1 << pi;
            }
        }
        m
    }

    /// indicator of pi(i)=j on a symmetric-group domain
    fn star_mask(d: &Domain, i: usize, j: usize) -> u64 {
        let e = d.universe.id_of(&format!("({i},{j})")).unwrap();
        let mut m = 0u64;
        for pi in 0..d.len() {
            if d.point_has(pi, e) {
                m |= 1 << pi;
            }
        }
        m
    }

    fn sign_mask(d: &Domain, n: usize) -> u64 {
        let mut m = 0u64;
        for pi in 0..d.len() {
            let perm = crate::catalog::point_to_perm(n, &d.points[pi]);
            let mut inversions = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if perm[a] > perm[b] {
                        inversions += 1;
                    }
                }
            }
            if inversions % 2 == 1 {
                m |= 1 << pi;
            }
        }
        m
    }

    #[test]
    fn degree_examples() {
        let (_, d, t) = setup("cube:3");
        assert_eq!(degree(&t, &parity_mask(&d)), 3);

        let (_, d4, t4) = setup("sym:4");
        // "1 lies in a 2-cycle"
        let mut two_cycle = 0u64;
        for pi in 0..d4.len() {
            let perm = crate::catalog::point_to_perm(4, &d4.points[pi]);
            let involved = (2..=4).any(|i| perm[0] == i && perm[i - 1] == 1);
            if involved {
                two_cycle |= 1 << pi;
            }
        }
        assert_eq!(degree(&t4, &two_cycle), 2);
        assert_eq!(degree(&t4, &sign_mask(&d4, 4)), 3);
    }

    #[test]
    fn approx_degree_examples() {
        let (_, d, t) = setup("cube:2");
        let f = or_mask(&d);
        // frozen oracle values for OR_2 (equioscillation by hand):
        // best constant errs 1/2; best degree-1 errs 1/4.
        assert_eq!(chebyshev_error(&t, &f, 0), rat(1, 2));
        assert_eq!(chebyshev_error(&t, &f, 1), rat(1, 4));
        assert_eq!(approx_degree(&t, &f, &rat(1, 3)), 1);
        // adeg_0 = deg
        assert_eq!(approx_degree(&t, &f, &rat_zero()), degree(&t, &f));
        // constants keep adeg 0 at every eps
        assert_eq!(approx_degree(&t, &0u64, &rat(1, 3)), 0);
    }

    #[test]
    fn certificate_examples() {
        let (_, d, t) = setup("cube:3");
        let dictator = {
            let e = d.universe.id_of("(1,1)").unwrap();
            let mut m = 0u64;
            for pi in 0..d.len() {
                if d.point_has(pi, e) {
                    m |= 1 << pi;
                }
            }
            m
        };
        let (c, ..) = certificate_complexity(&t, &dictator);
        assert_eq!(c, 1);

        let f = or_mask(&d);
        let certs = certificates(&t, &f);
        // the all-zero point (canonically first) needs all 3 coordinates
        assert_eq!(certs[0].members.len(), 3);

        let (_, d3, t3) = setup("sym:3");
        let star = star_mask(&d3, 1, 1);
        let (c, ..) = certificate_complexity(&t3, &star);
        assert_eq!(c, 1);
    }

    #[test]
    fn certificates_force_their_links() {
        let (_, d, t) = setup("sym:3");
        let f = sign_mask(&d, 3);
        for cert in certificates(&t, &f) {
            for pi in domain::link(&d, &cert.members) {
                assert_eq!(f.test(pi), cert.value);
            }
        }
    }

    #[test]
    fn decision_tree_examples() {
        let (_, d, t) = setup("cube:4");
        let f = parity_mask(&d);
        let (depth, tree) = decision_tree_complexity(&d, &t, &f);
        assert_eq!(depth, 4);
        assert!(tree.replays(&d, &f));

        let (depth0, tree0) = decision_tree_complexity(&d, &t, &0u64);
        assert_eq!(depth0, 0);
        assert!(tree0.replays(&d, &0u64));

        let (_, d3, t3) = setup("sym:3");
        let sign = sign_mask(&d3, 3);
        let (depth, tree) = decision_tree_complexity(&d3, &t3, &sign);
        assert_eq!(depth, 2);
        assert!(tree.replays(&d3, &sign));
    }

    #[test]
    fn sensitivity_examples() {
        let (_, d, t) = setup("cube:3");
        assert_eq!(sensitivity(&d, &t, &parity_mask(&d)), 3);

        let (_, d4, t4) = setup("sym:4");
        // "some 2-cycle (2i-1 2i) appears": sensitivity n/2 at the identity
        let mut f = 0u64;
        for pi in 0..d4.len() {
            let perm = crate::catalog::point_to_perm(4, &d4.points[pi]);
            let hit = (perm[0] == 2 && perm[1] == 1) || (perm[2] == 4 && perm[3] == 3);
            if hit {
                f |= 1 << pi;
            }
        }
        let id_index = d4
            .points
            .iter()
            .position(|p| crate::catalog::point_to_perm(4, p) == vec![1, 2, 3, 4])
            .unwrap();
        assert_eq!(sensitivity_at(&d4, &t4, &f, id_index), 2);

        let dictator = star_mask(&d4, 1, 1);
        assert_eq!(block_sensitivity(&d4, &t4, &dictator, true), 1);
        assert_eq!(block_sensitivity(&d4, &t4, &dictator, false), 1);
    }

    #[test]
    fn edge_sensitivity_bounded_by_sensitivity() {
        let (spec, d, t) = setup("sym:3");
        let f = sign_mask(&d, 3);
        let ts = edge_sensitivity(&spec, &t, &f).unwrap();
        assert_eq!(ts, 3); // every transposition flips the sign
        for xi in 0..d.len() {
            assert!(flip_count_at(&t, &f, xi) <= 2 * 3 * sensitivity_at(&d, &t, &f, xi));
        }
        let (cube_spec, _, ct) = setup("cube:3");
        assert!(edge_sensitivity(&cube_spec, &ct, &0u64).is_err());
    }

    #[test]
    fn fractional_bs_examples() {
        let (_, d, t) = setup("cube:2");
        let f = or_mask(&d);
        // frozen oracle: at 00 the two unit blocks pack to 2
        let (p, dual) = fractional_bs_at(&d, &t, &f, 0);
        assert_eq!(p, rat(2, 1));
        assert_eq!(p, dual);
        assert_eq!(fractional_bs(&d, &t, &f), rat(2, 1));
        assert_eq!(fractional_bs(&d, &t, &0u64), rat_zero());
    }

    #[test]
    fn unambiguous_examples() {
        let (_, d, t) = setup("cube:3");
        let dictator = {
            let e = d.universe.id_of("(1,1)").unwrap();
            let mut m = 0u64;
            for pi in 0..d.len() {
                if d.point_has(pi, e) {
                    m |= 1 << pi;
                }
            }
            m
        };
        let u = unambiguous_certificate_complexity(&t, &dictator, 1, 3, 1 << 20);
        assert_eq!(u, UValue::Exact(1));
        let u0 = unambiguous_certificate_complexity(&t, &0u64, 0, 0, 1 << 20);
        assert_eq!(u0, UValue::Exact(0));
    }

    #[test]
    fn algorithm1_depth_and_replay() {
        let (_, d, t) = setup("sym:3");
        let star = star_mask(&d, 1, 1);
        let tree = algorithm1_tree(&d, &t, &star, 3).unwrap();
        assert!(tree.replays(&d, &star));
        assert!(tree.depth() <= 2); // max_degree * C_0 * C_1 = 2*1*1

        let constant = algorithm1_tree(&d, &t, &0u64, 3).unwrap();
        assert_eq!(constant.depth(), 0);

        let (depth, _) = decision_tree_complexity(&d, &t, &star);
        assert!(tree.depth() >= depth);
    }

    #[test]
    fn minimal_block_examples() {
        let (_, d, t) = setup("cube:3");
        let f = or_mask(&d);
        // x = 000 (index 0), y = 111 (index 7): some weight-1 z suffices
        let zi = minimal_block(&d, &t, &f, 0, 7).unwrap();
        assert_eq!(domain::distance(&d.points[0], &d.points[zi]), 1);
        // when |x\y| is already minimal the only candidate is y
        let one = d.points.iter().position(|p| {
            p.0.iter().filter(|&&e| d.universe.labels[e as usize].ends_with(",1)")).count() == 1
        });
        let yi = one.unwrap();
        assert_eq!(minimal_block(&d, &t, &f, 0, yi).unwrap(), yi);

        // sign on S_4: shrinking a 4-cycle lands on a transposition
        let (_, d4, t4) = setup("sym:4");
        let sign = sign_mask(&d4, 4);
        let id = d4
            .points
            .iter()
            .position(|p| crate::catalog::point_to_perm(4, p) == vec![1, 2, 3, 4])
            .unwrap();
        let cyc = d4
            .points
            .iter()
            .position(|p| crate::catalog::point_to_perm(4, p) == vec![2, 3, 4, 1])
            .unwrap();
        assert_ne!(sign.test(id), sign.test(cyc));
        let zi = minimal_block(&d4, &t4, &sign, id, cyc).unwrap();
        assert_eq!(t4.dist[id][zi], 2);
    }

    #[test]
    fn closer_points_on_cube_are_single_flips() {
        let (spec, d, t) = setup("cube:4");
        let d2 = d.clone();
        let oracle = move |elems: &[ElemId]| membership(&spec, &d2, elems);
        let far = d.len() - 1;
        let zs = find_closer_points(&d, &t, &oracle, 0, far);
        assert_eq!(zs.len(), t.dist[0][far] as usize);
        for &z in &zs {
            assert!(t.dist[0][z] < t.dist[0][far]);
            assert_eq!(t.dist[far][z], 1);
        }
    }

    #[test]
    fn closer_points_shortcut_cycles() {
        let (spec, d, t) = setup("sym:4");
        let d2 = d.clone();
        let oracle = move |elems: &[ElemId]| membership(&spec, &d2, elems);
        let id = d
            .points
            .iter()
            .position(|p| crate::catalog::point_to_perm(4, p) == vec![1, 2, 3, 4])
            .unwrap();
        let three_cycle = d
            .points
            .iter()
            .position(|p| crate::catalog::point_to_perm(4, p) == vec![2, 3, 1, 4])
            .unwrap();
        let zs = find_closer_points(&d, &t, &oracle, id, three_cycle);
        assert!(!zs.is_empty());
        // at distance chunk, the start point itself is the unique witness
        let t12 = d
            .points
            .iter()
            .position(|p| crate::catalog::point_to_perm(4, p) == vec![2, 1, 3, 4])
            .unwrap();
        let zs = find_closer_points(&d, &t, &oracle, id, t12);
        assert_eq!(zs, vec![id]);
    }

    #[test]
    fn ball_reconstruction_of_low_sensitivity_functions() {
        // dictator on cube:4 with s = 1, radius 2s+1 = 3
        let (spec, d, t) = setup("cube:4");
        let d2 = d.clone();
        let oracle = move |elems: &[ElemId]| membership(&spec, &d2, elems);
        let e = d.universe.id_of("(1,1)").unwrap();
        let mut f = 0u64;
        for pi in 0..d.len() {
            if d.point_has(pi, e) {
                f |= 1 << pi;
            }
        }
        assert_eq!(sensitivity(&d, &t, &f), 1);
        let known = |pi: usize| f.test(pi);
        let rec = ball_reconstruct(&d, &t, &oracle, 0, 1, 3, &known).unwrap();
        assert_eq!(rec.to_mask::<u64>(), f);

        // constants reconstruct from radius 1
        let rec = ball_reconstruct(&d, &t, &oracle, 0, 0, 1, &|_| true).unwrap();
        assert_eq!(rec.to_mask::<u64>(), u64::full(d.len()));
    }

    #[test]
    fn report_on_constant_is_all_zero() {
        let (spec, d, t) = setup("sym:3");
        let r = measure_report(&d, &t, Some(&spec), &0u64, &MeasureOptions::default());
        assert_eq!((r.deg, r.adeg, r.c, r.d, r.s, r.bs), (0, 0, 0, 0, 0, 0));
        assert_eq!(r.fbs, "0");
        assert_eq!(r.u, UValue::Exact(0));
    }

    #[test]
    fn bit_string_round_trip() {
        let f = BooleanFunction::from_bit_string("0110").unwrap();
        assert_eq!(f.to_bit_string(), "0110");
        assert_eq!(f.to_mask::<u64>(), 0b0110);
        assert!(BooleanFunction::from_bit_string("01x").is_err());
    }
}
