//! Set-system domains: every point is an `n`-element subset of a finite
//! universe, and queries are universe subsets meeting each point exactly
//! once. Structural parameters (chunk size, maximum element degree, conflict
//! bound, sensitivity ratios, composability) are computed by exact brute
//! force over the enumerated points.

use std::collections::{HashMap, HashSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::rat::{rat, rat_zero, Rat};
use crate::numerics::RatMatrix;

pub type ElemId = u32;

/// Ordered list of distinct opaque element labels; ids are positions.
#[derive(Clone, Debug)]
pub struct Universe {
    pub labels: Vec<String>,
    index: HashMap<String, ElemId>,
}

impl Universe {
    pub fn new(labels: Vec<String>) -> Self {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            let prev = index.insert(l.clone(), i as ElemId);
            assert!(prev.is_none(), "duplicate universe label {l}");
        }
        Universe { labels, index }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn id_of(&self, label: &str) -> Option<ElemId> {
        self.index.get(label).copied()
    }
}

/// A point (facet): sorted element ids, cardinality = domain dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<ElemId>);

/// A query: sorted element ids; meets every point in exactly one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query(pub Vec<ElemId>);

/// A partial input (face): subset of at least one point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialInput(pub Vec<ElemId>);

#[derive(Clone, Debug)]
pub struct Domain {
    pub universe: Universe,
    /// Canonical order: lexicographic on the sorted member-id lists.
    pub points: Vec<Point>,
    pub queries: Vec<Query>,
    pub query_labels: Vec<String>,
    pub dimension: usize,
}

/// Closed-form structural parameters carried by catalog domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainParams {
    pub chunk: usize,
    pub max_degree: usize,
    pub conflict_bound: ConflictBound,
    /// Lower bound on the block sensitivity ratio B.
    pub bs_ratio_lb: Rat,
    /// Lower bound on the sensitivity ratio B-tilde, when known.
    pub sens_ratio_lb: Option<Rat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConflictBound {
    Exact(usize),
    /// No violation up to the search limit.
    AtLeast(usize),
}

impl ConflictBound {
    /// The guaranteed separation size.
    pub fn value(&self) -> usize {
        match *self {
            ConflictBound::Exact(k) | ConflictBound::AtLeast(k) => k,
        }
    }
}

/// One structural defect found by [`validate_domain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    PointSize { point: usize, size: usize },
    DuplicatePoint { point: usize },
    QueryIntersection { query: usize, point: usize, count: usize },
    Coverage { missing: Vec<ElemId> },
    PointOrder,
}

/// Checks every structural invariant; the report is empty iff the domain is
/// well formed.
pub fn validate_domain(d: &Domain) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (pi, p) in d.points.iter().enumerate() {
        if p.0.len() != d.dimension {
            out.push(Violation::PointSize { point: pi, size: p.0.len() });
        }
        if !seen.insert(&p.0) {
            out.push(Violation::DuplicatePoint { point: pi });
        }
    }
    if d.points.windows(2).any(|w| w[0] > w[1]) {
        out.push(Violation::PointOrder);
    }
    for (qi, q) in d.queries.iter().enumerate() {
        let qset: HashSet<ElemId> = q.0.iter().copied().collect();
        for (pi, p) in d.points.iter().enumerate() {
            let count = p.0.iter().filter(|e| qset.contains(e)).count();
            if count != 1 {
                out.push(Violation::QueryIntersection { query: qi, point: pi, count });
            }
        }
    }
    let mut covered = vec![false; d.universe.size()];
    for q in &d.queries {
        for &e in &q.0 {
            covered[e as usize] = true;
        }
    }
    let missing: Vec<ElemId> =
        (0..d.universe.size() as ElemId).filter(|&e| !covered[e as usize]).collect();
    if !missing.is_empty() {
        out.push(Violation::Coverage { missing });
    }
    out
}

impl Domain {
    pub fn new(
        universe: Universe,
        mut points: Vec<Point>,
        queries: Vec<Query>,
        query_labels: Vec<String>,
        dimension: usize,
    ) -> Self {
        points.sort();
        assert_eq!(queries.len(), query_labels.len());
        Domain { universe, points, queries, query_labels, dimension }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_index(&self, p: &Point) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    /// Element sets as sorted vectors come in; this gives O(1) membership.
    pub fn point_has(&self, pi: usize, e: ElemId) -> bool {
        self.points[pi].0.binary_search(&e).is_ok()
    }
}

/// |x \ y| for two element lists (sorted).
pub fn set_difference_size(x: &[ElemId], y: &[ElemId]) -> usize {
    let yset: HashSet<ElemId> = y.iter().copied().collect();
    x.iter().filter(|e| !yset.contains(e)).count()
}

pub fn set_difference(x: &[ElemId], y: &[ElemId]) -> Vec<ElemId> {
    let yset: HashSet<ElemId> = y.iter().copied().collect();
    x.iter().copied().filter(|e| !yset.contains(e)).collect()
}

pub fn set_intersection_size(x: &[ElemId], y: &[ElemId]) -> usize {
    let yset: HashSet<ElemId> = y.iter().copied().collect();
    x.iter().filter(|e| yset.contains(e)).count()
}

/// Distance between two points: |x \ y| (= |y \ x| since sizes agree).
pub fn distance(x: &Point, y: &Point) -> usize {
    set_difference_size(&x.0, &y.0)
}

/// All points within distance `r` of `x`, inclusive, in canonical order.
pub fn ball(d: &Domain, x: &Point, r: usize) -> Vec<usize> {
    (0..d.len()).filter(|&i| distance(&d.points[i], x) <= r).collect()
}

/// All points containing `s`, in canonical order.
pub fn link(d: &Domain, s: &[ElemId]) -> Vec<usize> {
    (0..d.len())
        .filter(|&i| s.iter().all(|&e| d.point_has(i, e)))
        .collect()
}

/// Maximum size of a link over all faces of size exactly `t`.
pub fn max_link_size(d: &Domain, t: usize) -> usize {
    if t == 0 {
        return d.len();
    }
    let faces = enumerate_faces(d, t);
    faces
        .iter()
        .filter(|f| f.len() == t)
        .map(|f| link(d, f).len())
        .max()
        .unwrap_or(0)
}

/// Minimum |x \ y| over distinct point pairs.
pub fn chunk_size(d: &Domain) -> Result<usize> {
    if d.len() < 2 {
        return Err(Error::DegenerateDomain(format!(
            "chunk size needs at least 2 points, have {}",
            d.len()
        )));
    }
    let mut best = usize::MAX;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            best = best.min(distance(&d.points[i], &d.points[j]));
        }
    }
    Ok(best)
}

/// Maximum number of queries mentioning a single element.
pub fn max_degree_param(d: &Domain) -> usize {
    let mut deg = vec![0usize; d.universe.size()];
    for q in &d.queries {
        for &e in &q.0 {
            deg[e as usize] += 1;
        }
    }
    deg.into_iter().max().unwrap_or(0)
}

/// All faces (subsets of points) of size <= max_size, deduplicated, sorted.
pub fn enumerate_faces(d: &Domain, max_size: usize) -> Vec<Vec<ElemId>> {
    let mut out: HashSet<Vec<ElemId>> = HashSet::new();
    out.insert(Vec::new());
    for p in &d.points {
        let elems = &p.0;
        // all subsets of size 1..=max_size
        let n = elems.len();
        let mut stack: Vec<(usize, Vec<ElemId>)> = vec![(0, Vec::new())];
        while let Some((start, cur)) = stack.pop() {
            for i in start..n {
                let mut next = cur.clone();
                next.push(elems[i]);
                if next.len() <= max_size {
                    out.insert(next.clone());
                    if next.len() < max_size {
                        stack.push((i + 1, next));
                    }
                }
            }
        }
    }
    let mut v: Vec<Vec<ElemId>> = out.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

/// Do two faces conflict (no point contains both)?
pub fn faces_conflict(d: &Domain, c1: &[ElemId], c2: &[ElemId]) -> bool {
    !(0..d.len()).any(|i| {
        c1.iter().all(|&e| d.point_has(i, e)) && c2.iter().all(|&e| d.point_has(i, e))
    })
}

/// Does some query meet `c1` and `c2` at different elements?
fn query_separates(d: &Domain, c1: &[ElemId], c2: &[ElemId]) -> bool {
    d.queries.iter().any(|q| {
        let a: Vec<ElemId> = q.0.iter().copied().filter(|e| c1.contains(e)).collect();
        let b: Vec<ElemId> = q.0.iter().copied().filter(|e| c2.contains(e)).collect();
        a.len() == 1 && b.len() == 1 && a[0] != b[0]
    })
}

/// Largest k <= limit such that every conflicting pair of faces of size <= k
/// is separated by some query; `AtLeast(limit)` when no violation exists.
pub fn conflict_bound(d: &Domain, limit: usize) -> ConflictBound {
    let faces = enumerate_faces(d, limit);
    let links: Vec<HashSet<usize>> =
        faces.iter().map(|f| link(d, f).into_iter().collect()).collect();
    // Smallest k admitting a conflicting-but-unseparated pair of size <= k.
    let mut min_violation: Option<usize> = None;
    for (i, c1) in faces.iter().enumerate() {
        if c1.is_empty() {
            continue;
        }
        for (j, c2) in faces.iter().enumerate() {
            if j <= i || c2.is_empty() {
                continue;
            }
            let k = c1.len().max(c2.len());
            if let Some(m) = min_violation {
                if k >= m {
                    continue;
                }
            }
            let conflict = links[i].is_disjoint(&links[j]);
            if conflict && !query_separates(d, c1, c2) {
                min_violation = Some(k);
            }
        }
    }
    match min_violation {
        Some(k) => ConflictBound::Exact(k - 1),
        None => ConflictBound::AtLeast(limit),
    }
}

/// Result of a ratio computation; `exact` is false when the search was
/// truncated by the node budget (the value is then a certified lower bound).
#[derive(Clone, Debug, PartialEq)]
pub struct RatioBound {
    pub value: Rat,
    pub exact: bool,
}

/// max packing of disjoint blocks (bit masks over a small index set).
fn max_disjoint_packing(blocks: &[u32]) -> usize {
    // DP over subsets of the union; block sets here have <= ~20 bits.
    fn rec(avail: u32, blocks: &[u32], memo: &mut HashMap<u32, usize>) -> usize {
        if let Some(&v) = memo.get(&avail) {
            return v;
        }
        let mut best = 0;
        for &b in blocks {
            if b & !avail == 0 {
                best = best.max(1 + rec(avail & !b, blocks, memo));
            }
        }
        memo.insert(avail, best);
        best
    }
    let mut memo = HashMap::new();
    let all = blocks.iter().fold(0, |a, b| a | b);
    rec(all, blocks, &mut memo)
}

fn ratio_lb(d: &Domain, chunk: Option<usize>) -> Result<RatioBound> {
    if d.len() < 2 {
        return Err(Error::DegenerateDomain("ratio needs at least 2 points".into()));
    }
    let mut worst: Option<Rat> = None;
    for xi in 0..d.len() {
        for yi in 0..d.len() {
            if xi == yi {
                continue;
            }
            let x = &d.points[xi];
            let y = &d.points[yi];
            let x_minus_y = set_difference(&x.0, &y.0);
            let dxy = x_minus_y.len();
            let y_minus_x = set_difference(&y.0, &x.0);
            // local indices for elements of y \ x; blocks y\z live inside it
            let local: HashMap<ElemId, usize> =
                y_minus_x.iter().enumerate().map(|(i, &e)| (e, i)).collect();
            let mut blocks: HashSet<u32> = HashSet::new();
            for zi in 0..d.len() {
                let z = &d.points[zi];
                let xz = set_difference(&x.0, &z.0);
                // x \ z must be a strict subset of x \ y
                if xz.len() >= dxy || !xz.iter().all(|e| x_minus_y.contains(e)) {
                    continue;
                }
                let yz = set_difference(&y.0, &z.0);
                if let Some(c) = chunk {
                    if yz.len() != c {
                        continue;
                    }
                }
                let mut mask = 0u32;
                let mut ok = true;
                for e in &yz {
                    match local.get(e) {
                        Some(&i) => mask |= 1 << i,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok && mask != 0 {
                    blocks.insert(mask);
                }
            }
            let blocks: Vec<u32> = blocks.into_iter().collect();
            let s = max_disjoint_packing(&blocks);
            let r = rat(s as i64, dxy as i64);
            worst = Some(match worst {
                None => r,
                Some(w) => {
                    if r < w {
                        r
                    } else {
                        w
                    }
                }
            });
        }
    }
    Ok(RatioBound { value: worst.unwrap(), exact: true })
}

/// Block sensitivity ratio B: min over ordered point pairs (x, y) of the
/// largest family of witnesses z with x\z strictly inside x\y and pairwise
/// disjoint y\z, divided by |x \ y|.
pub fn block_sensitivity_ratio_lb(d: &Domain) -> Result<RatioBound> {
    ratio_lb(d, None)
}

/// Sensitivity ratio B-tilde: same with the extra requirement |y\z| = chunk.
pub fn sensitivity_ratio_lb(d: &Domain) -> Result<RatioBound> {
    let c = chunk_size(d)?;
    ratio_lb(d, Some(c))
}

#[derive(Clone, Debug)]
pub struct ComposabilityReport {
    /// Definition checked directly over all families of <= max_blocks.
    pub composable: bool,
    pub counterexample: Option<(usize, Vec<usize>)>,
    /// Whether the domain equals the 0/1 points of its affine hull.
    pub affine_criterion: bool,
}

/// Exhaustively checks closure under recombining disjoint difference blocks,
/// and separately whether the affine-hull criterion holds.
pub fn is_composable(d: &Domain, max_blocks: usize) -> ComposabilityReport {
    let point_set: HashSet<&Vec<ElemId>> = d.points.iter().map(|p| &p.0).collect();
    let mut counterexample = None;
    'outer: for xi in 0..d.len() {
        let x = &d.points[xi];
        let candidates: Vec<usize> = (0..d.len()).filter(|&yi| yi != xi).collect();
        // DFS over families with pairwise-disjoint x \ y_i.
        let mut stack: Vec<(usize, Vec<usize>, HashSet<ElemId>)> =
            vec![(0, Vec::new(), HashSet::new())];
        while let Some((start, family, used)) = stack.pop() {
            if family.len() >= 2 {
                // compose and check membership (size-1 families are trivially fine)
                let mut z: HashSet<ElemId> = x.0.iter().copied().collect();
                for &yi in &family {
                    let y = &d.points[yi];
                    for e in set_difference(&x.0, &y.0) {
                        z.remove(&e);
                    }
                    for e in set_difference(&y.0, &x.0) {
                        z.insert(e);
                    }
                }
                let mut zv: Vec<ElemId> = z.into_iter().collect();
                zv.sort_unstable();
                if !point_set.contains(&zv) {
                    counterexample = Some((xi, family.clone()));
                    break 'outer;
                }
            }
            if family.len() == max_blocks {
                continue;
            }
            for (k, &yi) in candidates.iter().enumerate().skip(start) {
                let diff = set_difference(&x.0, &d.points[yi].0);
                if diff.iter().any(|e| used.contains(e)) {
                    continue;
                }
                let mut used2 = used.clone();
                used2.extend(diff);
                let mut fam2 = family.clone();
                fam2.push(yi);
                stack.push((k + 1, fam2, used2));
            }
        }
    }
    let affine = affine_criterion(d);
    ComposabilityReport { composable: counterexample.is_none(), counterexample, affine_criterion: affine }
}

/// Is every 0/1 vector in the affine hull of the point indicators a point?
fn affine_criterion(d: &Domain) -> bool {
    let u = d.universe.size();
    // Left-kernel of the difference matrix gives the affine-hull equations.
    let p0 = &d.points[0];
    let mut indicator = vec![rat_zero(); u];
    for &e in &p0.0 {
        indicator[e as usize] = rat(1, 1);
    }
    let diffs: Vec<Vec<Rat>> = d.points[1..]
        .iter()
        .map(|p| {
            let mut v = vec![rat_zero(); u];
            for &e in &p.0 {
                v[e as usize] += rat(1, 1);
            }
            for (vi, b) in v.iter_mut().zip(indicator.iter()) {
                *vi -= b.clone();
            }
            v
        })
        .collect();
    if diffs.is_empty() {
        // Single point: hull = that point.
        return true;
    }
    let m = RatMatrix::from_rows(diffs);
    let equations = m.kernel(); // rows w with w . (p - p0) = 0 for all points
    // Affine hull = { v : w . v = w . p0 for all kernel rows w }.
    let rhs: Vec<Rat> = equations
        .iter()
        .map(|w| {
            let mut s = rat_zero();
            for &e in &p0.0 {
                s += w[e as usize].clone();
            }
            s
        })
        .collect();
    // DFS with interval pruning over 0/1 assignments.
    let point_set: HashSet<&Vec<ElemId>> = d.points.iter().map(|p| &p.0).collect();
    let mut assign = vec![false; u];
    dfs_zero_one(d, &equations, &rhs, &mut assign, 0, &point_set)
}

fn dfs_zero_one(
    d: &Domain,
    eqs: &[Vec<Rat>],
    rhs: &[Rat],
    assign: &mut Vec<bool>,
    pos: usize,
    points: &HashSet<&Vec<ElemId>>,
) -> bool {
    let u = d.universe.size();
    // Prune: each equation's achievable range must contain its rhs.
    for (w, b) in eqs.iter().zip(rhs) {
        let mut fixed = rat_zero();
        let mut lo = rat_zero();
        let mut hi = rat_zero();
        for j in 0..u {
            if j < pos {
                if assign[j] {
                    fixed += w[j].clone();
                }
            } else if w[j].is_negative() {
                lo += w[j].clone();
            } else {
                hi += w[j].clone();
            }
        }
        let need = b - &fixed;
        if need < lo || need > hi {
            return true; // branch infeasible: vacuously fine
        }
    }
    if pos == u {
        let mut v: Vec<ElemId> =
            (0..u as ElemId).filter(|&e| assign[e as usize]).collect();
        v.sort_unstable();
        return points.contains(&v);
    }
    assign[pos] = false;
    if !dfs_zero_one(d, eqs, rhs, assign, pos + 1, points) {
        return false;
    }
    assign[pos] = true;
    let ok = dfs_zero_one(d, eqs, rhs, assign, pos + 1, points);
    assign[pos] = false;
    ok
}

/// Check that disjointness of the x\y_i forces disjointness of the y_i\x
/// (exhaustive over pairs).
pub fn difference_disjointness_symmetry(d: &Domain) -> bool {
    for xi in 0..d.len() {
        let x = &d.points[xi];
        for yi in 0..d.len() {
            if yi == xi {
                continue;
            }
            for zi in yi + 1..d.len() {
                if zi == xi {
                    continue;
                }
                let y = &d.points[yi];
                let z = &d.points[zi];
                let xy = set_difference(&x.0, &y.0);
                let xz = set_difference(&x.0, &z.0);
                if xy.iter().any(|e| xz.contains(e)) {
                    continue;
                }
                let yx = set_difference(&y.0, &x.0);
                let zx = set_difference(&z.0, &x.0);
                if yx.iter().any(|e| zx.contains(e)) {
                    return false;
                }
            }
        }
    }
    true
}

impl DomainParams {
    pub fn ratios_consistent(&self) -> bool {
        match &self.sens_ratio_lb {
            Some(bt) => bt <= &self.bs_ratio_lb || bt.is_zero(),
            None => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, DomainSpec};

    fn cube(n: usize) -> Domain {
        build(&DomainSpec::Cube(n)).unwrap()
    }

    fn sym(n: usize) -> Domain {
        build(&DomainSpec::SymmetricGroup(n)).unwrap()
    }

    #[test]
    fn cube3_is_valid() {
        assert!(validate_domain(&cube(3)).is_empty());
    }

    #[test]
    fn missing_query_breaks_coverage() {
        let mut d = cube(3);
        d.queries.pop();
        d.query_labels.pop();
        let report = validate_domain(&d);
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::Coverage { missing } if !missing.is_empty())));
    }

    #[test]
    fn spurious_singleton_query_violates_intersection() {
        let mut d = sym(3);
        // the "query" {(1,1)} misses every permutation with pi(1) != 1
        let e = d.universe.id_of("(1,1)").unwrap();
        d.queries.push(Query(vec![e]));
        d.query_labels.push("bogus".into());
        let report = validate_domain(&d);
        let bad: Vec<_> = report
            .iter()
            .filter(|v| matches!(v, Violation::QueryIntersection { query: q, count: 0, .. } if *q == d.queries.len() - 1))
            .collect();
        assert_eq!(bad.len(), 4); // 4 of the 6 permutations move 1
    }

    #[test]
    fn chunk_sizes_match_known_values() {
        assert_eq!(chunk_size(&cube(3)).unwrap(), 1);
        assert_eq!(chunk_size(&sym(4)).unwrap(), 2);
        let pm6 = build(&DomainSpec::PerfectMatching { n: 3, parts: vec![2] }).unwrap();
        assert_eq!(chunk_size(&pm6).unwrap(), 2);
    }

    #[test]
    fn chunk_size_rejects_single_point() {
        let u = Universe::new(vec!["a".into(), "b".into()]);
        let dom = Domain::new(
            u,
            vec![Point(vec![0, 1])],
            vec![Query(vec![0]), Query(vec![1])],
            vec!["q0".into(), "q1".into()],
            2,
        );
        assert!(matches!(chunk_size(&dom), Err(Error::DegenerateDomain(_))));
    }

    #[test]
    fn max_degree_matches_known_values() {
        assert_eq!(max_degree_param(&cube(4)), 1);
        assert_eq!(max_degree_param(&sym(3)), 2);
        let pm = build(&DomainSpec::PerfectMatching { n: 2, parts: vec![3] }).unwrap();
        assert_eq!(max_degree_param(&pm), 3);
    }

    #[test]
    fn conflict_bounds_match_known_values() {
        let m23 = build(&DomainSpec::Multislice(vec![2, 3])).unwrap();
        assert_eq!(conflict_bound(&m23, 5), ConflictBound::Exact(1));
        assert_eq!(conflict_bound(&sym(3), 3), ConflictBound::AtLeast(3));
        assert_eq!(conflict_bound(&cube(3), 3), ConflictBound::AtLeast(3));
    }

    #[test]
    fn ratio_bounds_match_known_values() {
        let c3 = cube(3);
        assert_eq!(block_sensitivity_ratio_lb(&c3).unwrap().value, rat(1, 1));
        assert_eq!(sensitivity_ratio_lb(&c3).unwrap().value, rat(1, 1));
        let s4 = sym(4);
        let b = block_sensitivity_ratio_lb(&s4).unwrap().value;
        let bt = sensitivity_ratio_lb(&s4).unwrap().value;
        assert!(b >= rat(1, 3));
        assert!(bt >= rat(1, 3));
        assert!(bt <= b);
        let m22 = build(&DomainSpec::Multislice(vec![2, 2])).unwrap();
        assert_eq!(sensitivity_ratio_lb(&m22).unwrap().value, rat(1, 2));
    }

    #[test]
    fn composability_holds_on_standard_domains() {
        let r = is_composable(&cube(3), 3);
        assert!(r.composable && r.affine_criterion);
        let r = is_composable(&sym(3), 2);
        assert!(r.composable && r.affine_criterion);
    }

    #[test]
    fn weight_restricted_subcube_is_not_composable() {
        // points of the 3-cube with Hamming weight in {0,1}: composing two
        // disjoint single-bit flips lands on weight 2, which is missing.
        let full = cube(3);
        let keep: Vec<Point> = full
            .points
            .iter()
            .filter(|p| {
                let w = p.0.iter().filter(|&&e| full.universe.labels[e as usize].ends_with(",1)")).count();
                w == 0 || w == 1 || w == 3
            })
            .cloned()
            .collect();
        let d = Domain::new(
            full.universe.clone(),
            keep,
            full.queries.clone(),
            full.query_labels.clone(),
            3,
        );
        let r = is_composable(&d, 2);
        assert!(!r.composable);
        assert!(!r.affine_criterion);
    }

    #[test]
    fn two_point_antipodal_subcube_is_composable() {
        // weights {0,3}: no family of two distinct blocks exists, and the
        // affine hull meets {0,1}^U in exactly these two points.
        let full = cube(3);
        let keep: Vec<Point> = full
            .points
            .iter()
            .filter(|p| {
                let w = p.0.iter().filter(|&&e| full.universe.labels[e as usize].ends_with(",1)")).count();
                w == 0 || w == 3
            })
            .cloned()
            .collect();
        let d = Domain::new(
            full.universe.clone(),
            keep,
            full.queries.clone(),
            full.query_labels.clone(),
            3,
        );
        let r = is_composable(&d, 2);
        assert!(r.composable);
        assert!(r.affine_criterion);
    }

    #[test]
    fn distance_and_ball() {
        let s3 = sym(3);
        let id = Point(vec![
            s3.universe.id_of("(1,1)").unwrap(),
            s3.universe.id_of("(2,2)").unwrap(),
            s3.universe.id_of("(3,3)").unwrap(),
        ]);
        assert_eq!(distance(&id, &id), 0);
        let t12 = Point({
            let mut v = vec![
                s3.universe.id_of("(1,2)").unwrap(),
                s3.universe.id_of("(2,1)").unwrap(),
                s3.universe.id_of("(3,3)").unwrap(),
            ];
            v.sort_unstable();
            v
        });
        assert_eq!(distance(&id, &t12), 2);
        assert_eq!(ball(&s3, &id, 2).len(), 4); // id + three transpositions
        assert_eq!(ball(&s3, &id, 3).len(), 6);
        assert_eq!(ball(&s3, &id, 0).len(), 1);
    }

    #[test]
    fn link_sizes_match_factorials() {
        let s4 = sym(4);
        assert_eq!(max_link_size(&s4, 1), 6);
        assert_eq!(max_link_size(&s4, 0), 24);
        let pm6 = build(&DomainSpec::PerfectMatching { n: 3, parts: vec![2] }).unwrap();
        assert_eq!(max_link_size(&pm6, 1), 3);
    }

    #[test]
    fn disjoint_blocks_are_symmetric() {
        for d in [cube(3), sym(3)] {
            assert!(difference_disjointness_symmetry(&d));
        }
        let pm6 = build(&DomainSpec::PerfectMatching { n: 3, parts: vec![2] }).unwrap();
        assert!(difference_disjointness_symmetry(&pm6));
    }
}
