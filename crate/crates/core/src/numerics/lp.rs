//! Exact linear programming: dense two-phase simplex with Bland's pivot
//! rule, so every run terminates and every optimum is exact. The tableau
//! runs on fixed-width rationals first and falls back to arbitrary
//! precision on overflow.

use num_traits::{One, Signed, Zero};

use super::rat::{rat_zero, Rat};
use super::smallrat::SmallRat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

/// A linear program over rational data.
///
/// Variables may carry arbitrary lower/upper bounds (`None` = unbounded).
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub maximize: bool,
    pub objective: Vec<Rat>,
    pub constraints: Vec<(Vec<Rat>, Rel, Rat)>,
    pub bounds: Vec<(Option<Rat>, Option<Rat>)>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub objective_value: Rat,
    pub assignment: Vec<Rat>,
    /// Basic variable index per row of the standardized program; enough to
    /// re-verify optimality independently.
    pub basis: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(maximize: bool, objective: Vec<Rat>) -> Self {
        let n = objective.len();
        LinearProgram {
            maximize,
            objective,
            constraints: Vec::new(),
            bounds: vec![(Some(rat_zero()), None); n],
        }
    }

    pub fn constrain(&mut self, row: Vec<Rat>, rel: Rel, rhs: Rat) {
        assert_eq!(row.len(), self.objective.len(), "constraint arity mismatch");
        self.constraints.push((row, rel, rhs));
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rat>, upper: Option<Rat>) {
        self.bounds[var] = (lower, upper);
    }
}

/// Scalar used inside the tableau; operations return `None` on overflow.
pub trait Scalar: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn recip(&self) -> Option<Self>;
    fn lt(&self, o: &Self) -> Option<bool>;
    fn from_rat(x: &Rat) -> Option<Self>;
    fn to_rat(&self) -> Rat;
}

impl Scalar for Rat {
    fn zero() -> Self {
        rat_zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn recip(&self) -> Option<Self> {
        Some(Rat::recip(self))
    }
    fn lt(&self, o: &Self) -> Option<bool> {
        Some(self < o)
    }
    fn from_rat(x: &Rat) -> Option<Self> {
        Some(x.clone())
    }
    fn to_rat(&self) -> Rat {
        self.clone()
    }
}

impl Scalar for SmallRat {
    fn zero() -> Self {
        SmallRat::ZERO
    }
    fn one() -> Self {
        SmallRat::ONE
    }
    fn is_zero(&self) -> bool {
        SmallRat::is_zero(*self)
    }
    fn is_one(&self) -> bool {
        *self == SmallRat::ONE
    }
    fn is_positive(&self) -> bool {
        SmallRat::is_positive(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        SmallRat::add(*self, *o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        SmallRat::sub(*self, *o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        SmallRat::mul(*self, *o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        SmallRat::div(*self, *o)
    }
    fn recip(&self) -> Option<Self> {
        SmallRat::recip(*self)
    }
    fn lt(&self, o: &Self) -> Option<bool> {
        Some(self.cmp_checked(*o)? == std::cmp::Ordering::Less)
    }
    fn from_rat(x: &Rat) -> Option<Self> {
        SmallRat::from_rat(x)
    }
    fn to_rat(&self) -> Rat {
        SmallRat::to_rat(*self)
    }
}

/// How an original variable was rewritten into standard-form variables.
enum VarMap {
    /// x = lower + x'  (x' is column `col`)
    Shifted { col: usize, lower: Rat },
    /// x = upper - x'
    Reflected { col: usize, upper: Rat },
    /// x = x+ - x-
    Split { pos: usize, neg: usize },
}

pub fn lp_solve(p: &LinearProgram) -> LpOutcome {
    let n_orig = p.objective.len();
    assert!(p.bounds.len() == n_orig);
    for (row, _, _) in &p.constraints {
        assert_eq!(row.len(), n_orig);
    }

    // Rewrite variables so every standard-form variable is >= 0.
    let mut maps = Vec::with_capacity(n_orig);
    let mut n_std = 0usize;
    let mut extra_upper: Vec<(usize, Rat)> = Vec::new(); // x'_col <= bound
    for (lo, hi) in &p.bounds {
        match (lo, hi) {
            (Some(l), None) => {
                maps.push(VarMap::Shifted { col: n_std, lower: l.clone() });
                n_std += 1;
            }
            (Some(l), Some(u)) => {
                assert!(l <= u, "empty variable bound");
                maps.push(VarMap::Shifted { col: n_std, lower: l.clone() });
                extra_upper.push((n_std, u - l));
                n_std += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Reflected { col: n_std, upper: u.clone() });
                n_std += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: n_std, neg: n_std + 1 });
                n_std += 2;
            }
        }
    }

    // Standard-form objective (always maximize internally).
    let sign = if p.maximize { <Rat as One>::one() } else { -<Rat as One>::one() };
    let mut c_std = vec![rat_zero(); n_std];
    let mut obj_shift = rat_zero(); // contribution of bound substitutions
    for (j, m) in maps.iter().enumerate() {
        let cj = &p.objective[j] * &sign;
        match m {
            VarMap::Shifted { col, lower } => {
                obj_shift += &cj * lower;
                c_std[*col] = cj;
            }
            VarMap::Reflected { col, upper } => {
                obj_shift += &cj * upper;
                c_std[*col] = -cj;
            }
            VarMap::Split { pos, neg } => {
                c_std[*pos] = cj.clone();
                c_std[*neg] = -cj;
            }
        }
    }

    // Standard-form rows.
    let mut rows: Vec<(Vec<Rat>, Rel, Rat)> = Vec::new();
    for (row, rel, rhs) in &p.constraints {
        let mut r = vec![rat_zero(); n_std];
        let mut b = rhs.clone();
        for (j, m) in maps.iter().enumerate() {
            let a = &row[j];
            if Zero::is_zero(a) {
                continue;
            }
            match m {
                VarMap::Shifted { col, lower } => {
                    b -= a * lower;
                    r[*col] = a.clone();
                }
                VarMap::Reflected { col, upper } => {
                    b -= a * upper;
                    r[*col] = -a.clone();
                }
                VarMap::Split { pos, neg } => {
                    r[*pos] = a.clone();
                    r[*neg] = -a.clone();
                }
            }
        }
        rows.push((r, *rel, b));
    }
    for (col, ub) in extra_upper {
        let mut r = vec![rat_zero(); n_std];
        r[col] = <Rat as One>::one();
        rows.push((r, Rel::Le, ub));
    }

    // Normalize to nonnegative right-hand sides.
    for (r, rel, b) in rows.iter_mut() {
        if b.is_negative() {
            for a in r.iter_mut() {
                *a = -a.clone();
            }
            *b = -b.clone();
            *rel = match *rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
        }
    }

    let out = simplex_standard::<SmallRat>(n_std, &rows, &c_std)
        .or_else(|| simplex_standard::<Rat>(n_std, &rows, &c_std))
        .expect("exact arithmetic cannot overflow");

    match out {
        StdOutcome::Infeasible => LpOutcome::Infeasible,
        StdOutcome::Unbounded => LpOutcome::Unbounded,
        StdOutcome::Optimal { value, x, basis } => {
            let mut assignment = Vec::with_capacity(n_orig);
            for m in &maps {
                assignment.push(match m {
                    VarMap::Shifted { col, lower } => lower + &x[*col],
                    VarMap::Reflected { col, upper } => upper - &x[*col],
                    VarMap::Split { pos, neg } => &x[*pos] - &x[*neg],
                });
            }
            let objective_value = (value + obj_shift) * sign;
            LpOutcome::Optimal(LpSolution { objective_value, assignment, basis })
        }
    }
}

enum StdOutcome {
    Optimal { value: Rat, x: Vec<Rat>, basis: Vec<usize> },
    Infeasible,
    Unbounded,
}

/// Maximize c.x subject to `rows` and x >= 0, with nonnegative right-hand
/// sides. Returns None if the scalar type overflowed.
fn simplex_standard<T: Scalar>(
    n: usize,
    rows: &[(Vec<Rat>, Rel, Rat)],
    c: &[Rat],
) -> Option<StdOutcome> {
    let m = rows.len();
    // Column layout: structural | slack/surplus | artificial.
    let n_slack = rows.iter().filter(|(_, rel, _)| !matches!(rel, Rel::Eq)).count();
    let n_art = rows.iter().filter(|(_, rel, _)| !matches!(rel, Rel::Le)).count();
    let total = n + n_slack + n_art;

    let mut a: Vec<Vec<T>> = vec![vec![T::zero(); total + 1]; m];
    let mut basis = vec![usize::MAX; m];
    let mut art_cols = Vec::new();
    let mut sl = n;
    let mut ar = n + n_slack;
    for (i, (r, rel, b)) in rows.iter().enumerate() {
        for j in 0..n {
            a[i][j] = T::from_rat(&r[j])?;
        }
        a[i][total] = T::from_rat(b)?;
        match rel {
            Rel::Le => {
                a[i][sl] = T::one();
                basis[i] = sl;
                sl += 1;
            }
            Rel::Ge => {
                a[i][sl] = T::zero().sub(&T::one())?;
                sl += 1;
                a[i][ar] = T::one();
                basis[i] = ar;
                art_cols.push(ar);
                ar += 1;
            }
            Rel::Eq => {
                a[i][ar] = T::one();
                basis[i] = ar;
                art_cols.push(ar);
                ar += 1;
            }
        }
    }

    // Phase 1: maximize -sum(artificials).
    if !art_cols.is_empty() {
        let minus_one = T::zero().sub(&T::one())?;
        let mut c1 = vec![T::zero(); total];
        for &j in &art_cols {
            c1[j] = minus_one.clone();
        }
        let mut obj = price_out(&a, &basis, &c1, total)?;
        if !iterate(&mut a, &mut basis, &mut obj, total)? {
            return Some(StdOutcome::Unbounded); // cannot happen: bounded by 0
        }
        if !obj[total].is_zero() {
            return Some(StdOutcome::Infeasible);
        }
        // Pivot any remaining artificials out of the basis.
        let is_art = |j: usize| j >= n + n_slack;
        for i in 0..m {
            if is_art(basis[i]) {
                if let Some(j) = (0..n + n_slack).find(|&j| !a[i][j].is_zero()) {
                    pivot_full(&mut a, &mut basis, &mut obj, i, j, total)?;
                } // else: redundant row, stays inert
            }
        }
        // Freeze artificial columns at zero so they never re-enter.
        for &j in &art_cols {
            for row in a.iter_mut() {
                row[j] = T::zero();
            }
        }
    }

    // Phase 2.
    let c2: Vec<T> = {
        let mut v = vec![T::zero(); total];
        for j in 0..n {
            v[j] = T::from_rat(&c[j])?;
        }
        v
    };
    let mut obj = price_out(&a, &basis, &c2, total)?;
    if !iterate(&mut a, &mut basis, &mut obj, total)? {
        return Some(StdOutcome::Unbounded);
    }

    let mut x = vec![<Rat as Zero>::zero(); total];
    for i in 0..m {
        if basis[i] != usize::MAX {
            x[basis[i]] = a[i][total].to_rat();
        }
    }
    Some(StdOutcome::Optimal { value: obj[total].to_rat(), x: x[..n].to_vec(), basis })
}

/// Reduced-cost row for cost vector `c` against the current basis:
/// obj[j] = c_j - c_B B^-1 A_j, obj[total] = c_B B^-1 b.
fn price_out<T: Scalar>(a: &[Vec<T>], basis: &[usize], c: &[T], total: usize) -> Option<Vec<T>> {
    let mut obj = vec![T::zero(); total + 1];
    obj[..total].clone_from_slice(&c[..total]);
    for (i, &bi) in basis.iter().enumerate() {
        if bi == usize::MAX || c[bi].is_zero() {
            continue;
        }
        let cb = c[bi].clone();
        for j in 0..=total {
            if !a[i][j].is_zero() {
                obj[j] = obj[j].sub(&cb.mul(&a[i][j])?)?;
            }
        }
    }
    // obj[total] currently holds -(value); store the value itself.
    obj[total] = T::zero().sub(&obj[total])?;
    Some(obj)
}

/// Bland-rule simplex: Some(true) at optimum, Some(false) if unbounded,
/// None on scalar overflow.
fn iterate<T: Scalar>(
    a: &mut [Vec<T>],
    basis: &mut [usize],
    obj: &mut [T],
    total: usize,
) -> Option<bool> {
    loop {
        // Entering: lowest index with positive reduced cost.
        let Some(enter) = (0..total).find(|&j| obj[j].is_positive()) else {
            return Some(true);
        };
        // Leaving: minimum ratio, ties broken by lowest basis variable.
        let mut leave: Option<usize> = None;
        let mut best: Option<T> = None;
        for i in 0..a.len() {
            if a[i][enter].is_positive() {
                let ratio = a[i][total].div(&a[i][enter])?;
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio.lt(b)?
                            || (!b.lt(&ratio)? && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Some(false);
        };
        pivot_full(a, basis, obj, leave, enter, total)?;
    }
}

fn pivot_full<T: Scalar>(
    a: &mut [Vec<T>],
    basis: &mut [usize],
    obj: &mut [T],
    row: usize,
    col: usize,
    total: usize,
) -> Option<()> {
    let inv = a[row][col].recip()?;
    if !inv.is_one() {
        for j in 0..=total {
            if !a[row][j].is_zero() {
                a[row][j] = a[row][j].mul(&inv)?;
            }
        }
    }
    for i in 0..a.len() {
        if i != row && !a[i][col].is_zero() {
            let f = a[i][col].clone();
            for j in 0..=total {
                if !a[row][j].is_zero() {
                    a[i][j] = a[i][j].sub(&f.mul(&a[row][j])?)?;
                }
            }
            a[i][col] = T::zero();
        }
    }
    // Objective row: rc'_j = rc_j - rc_col * a'[row][j]; the value grows by
    // rc_col * a'[row][total].
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for j in 0..total {
            if !a[row][j].is_zero() {
                obj[j] = obj[j].sub(&f.mul(&a[row][j])?)?;
            }
        }
        obj[col] = T::zero();
        obj[total] = obj[total].add(&f.mul(&a[row][total])?)?;
    }
    basis[row] = col;
    Some(())
}

/// Re-verify a claimed optimal solution: bound and constraint feasibility
/// plus agreement of the primal objective with the claimed value.
pub fn verify_solution(p: &LinearProgram, sol: &LpSolution) -> bool {
    let x = &sol.assignment;
    if x.len() != p.objective.len() {
        return false;
    }
    for (j, (lo, hi)) in p.bounds.iter().enumerate() {
        if let Some(l) = lo {
            if &x[j] < l {
                return false;
            }
        }
        if let Some(u) = hi {
            if &x[j] > u {
                return false;
            }
        }
    }
    for (row, rel, rhs) in &p.constraints {
        let mut lhs = rat_zero();
        for (a, xj) in row.iter().zip(x) {
            if !Zero::is_zero(a) {
                lhs += a * xj;
            }
        }
        let ok = match rel {
            Rel::Le => lhs <= *rhs,
            Rel::Eq => lhs == *rhs,
            Rel::Ge => lhs >= *rhs,
        };
        if !ok {
            return false;
        }
    }
    let mut val = rat_zero();
    for (c, xj) in p.objective.iter().zip(x) {
        if !Zero::is_zero(c) {
            val += c * xj;
        }
    }
    val == sol.objective_value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat::{rat, rat_int};

    #[test]
    fn trivial_box() {
        // maximize x s.t. x <= 1, x >= 0  ->  1
        let mut p = LinearProgram::new(true, vec![rat_int(1)]);
        p.constrain(vec![rat_int(1)], Rel::Le, rat_int(1));
        let LpOutcome::Optimal(sol) = lp_solve(&p) else { panic!("expected optimum") };
        assert_eq!(sol.objective_value, rat_int(1));
        assert!(verify_solution(&p, &sol));
    }

    #[test]
    fn equality_and_free_variables() {
        // minimize x + y s.t. x - y = 3, y free, x >= 0: y = x - 3 gives
        // objective 2x - 3, minimized at x = 0.
        let mut p = LinearProgram::new(false, vec![rat_int(1), rat_int(1)]);
        p.constrain(vec![rat_int(1), rat_int(-1)], Rel::Eq, rat_int(3));
        p.set_bounds(1, None, None);
        let LpOutcome::Optimal(sol) = lp_solve(&p) else { panic!("expected optimum") };
        assert_eq!(sol.objective_value, rat_int(-3));
        assert!(verify_solution(&p, &sol));
    }

    #[test]
    fn infeasible_detected() {
        let mut p = LinearProgram::new(true, vec![rat_int(1)]);
        p.constrain(vec![rat_int(1)], Rel::Le, rat_int(1));
        p.constrain(vec![rat_int(1)], Rel::Ge, rat_int(2));
        assert!(matches!(lp_solve(&p), LpOutcome::Infeasible));
    }

    #[test]
    fn unbounded_detected() {
        let mut p = LinearProgram::new(true, vec![rat_int(1), rat_int(0)]);
        p.constrain(vec![rat_int(0), rat_int(1)], Rel::Le, rat_int(5));
        assert!(matches!(lp_solve(&p), LpOutcome::Unbounded));
    }

    #[test]
    fn fractional_optimum() {
        // maximize x + y s.t. 2x + y <= 2, x + 2y <= 2 -> x = y = 2/3
        let mut p = LinearProgram::new(true, vec![rat_int(1), rat_int(1)]);
        p.constrain(vec![rat_int(2), rat_int(1)], Rel::Le, rat_int(2));
        p.constrain(vec![rat_int(1), rat_int(2)], Rel::Le, rat_int(2));
        let LpOutcome::Optimal(sol) = lp_solve(&p) else { panic!("expected optimum") };
        assert_eq!(sol.objective_value, rat(4, 3));
        assert!(verify_solution(&p, &sol));
    }

    #[test]
    fn degenerate_instances_terminate() {
        let mut p = LinearProgram::new(true, vec![rat_int(1), rat_int(1), rat_int(1)]);
        for _ in 0..4 {
            p.constrain(vec![rat_int(1), rat_int(-1), rat_int(0)], Rel::Le, rat_int(0));
            p.constrain(vec![rat_int(0), rat_int(1), rat_int(-1)], Rel::Le, rat_int(0));
        }
        p.constrain(vec![rat_int(1), rat_int(1), rat_int(1)], Rel::Le, rat_int(3));
        let LpOutcome::Optimal(sol) = lp_solve(&p) else { panic!("expected optimum") };
        assert_eq!(sol.objective_value, rat_int(3));
    }

    #[test]
    fn upper_bounded_variables() {
        // maximize 3x + 2y with 0 <= x <= 1/2, 0 <= y <= 1, x + y <= 1.
        let mut p = LinearProgram::new(true, vec![rat_int(3), rat_int(2)]);
        p.set_bounds(0, Some(rat_int(0)), Some(rat(1, 2)));
        p.set_bounds(1, Some(rat_int(0)), Some(rat_int(1)));
        p.constrain(vec![rat_int(1), rat_int(1)], Rel::Le, rat_int(1));
        let LpOutcome::Optimal(sol) = lp_solve(&p) else { panic!("expected optimum") };
        assert_eq!(sol.objective_value, rat(5, 2));
        assert!(verify_solution(&p, &sol));
    }

    #[test]
    fn covering_instance_with_unit_bounds() {
        // minimize sum d_k, d in [0,1]^4, covering a fixed block family;
        // singleton blocks 0100 and 1000 force their bits, 0011 adds one
        // more: optimum 3.
        let blocks: [u32; 9] =
            [0b0011, 0b0100, 0b0110, 0b0111, 0b1000, 0b1011, 0b1101, 0b1110, 0b1111];
        let mut q = LinearProgram::new(false, vec![rat_int(1); 4]);
        for k in 0..4 {
            q.set_bounds(k, Some(rat_int(0)), Some(rat_int(1)));
        }
        for &b in &blocks {
            let row: Vec<Rat> =
                (0..4).map(|k| if b >> k & 1 == 1 { rat_int(1) } else { rat_int(0) }).collect();
            q.constrain(row, Rel::Ge, rat_int(1));
        }
        let LpOutcome::Optimal(sol) = lp_solve(&q) else { panic!("expected optimum") };
        assert_eq!(sol.objective_value, rat_int(3));
        assert!(verify_solution(&q, &sol));
    }
}
