//! Effective divisors `D = Σ m_i E_i` supported on the exceptional set, the
//! constraint `(D + E + K)·E_i + 2 ≤ 0`, and the multiplicity map
//! `n_i = −D·E_i`.
//!
//! Rearranged with adjunction (`K·E_i = 2g_i − 2 − e_i`) and
//! `E·E_i = e_i + v_i`, the constraint reads `D·E_i ≤ −(v_i + 2g_i)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::DivisorError;
use crate::graph::PlumbingGraph;

/// Default cap on `Σ m_i` during descent.
pub const DEFAULT_DESCENT_CAP: u64 = 1_000_000;

/// Effective divisor: one non-negative multiplicity per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Divisor(Vec<u64>);

impl Divisor {
    pub fn new(multiplicities: Vec<u64>) -> Self {
        Self(multiplicities)
    }

    pub fn zero(r: usize) -> Self {
        Self(vec![0; r])
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    fn as_i128(&self) -> Vec<i128> {
        self.0.iter().map(|&m| i128::from(m)).collect()
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Right-hand sides `c_i = −(v_i + 2g_i)` of `D·E_i ≤ c_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ConstraintVector(Vec<i64>);

impl ConstraintVector {
    pub fn bounds(&self) -> &[i64] {
        &self.0
    }
}

/// Binding multiplicities `n_i = −D·E_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct MultiplicityVector(Vec<i64>);

impl MultiplicityVector {
    pub fn new(counts: Vec<i64>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Certificate for a candidate divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorReport {
    pub divisor: Divisor,
    pub multiplicities: MultiplicityVector,
    /// `c_i − D·E_i`; the constraint holds at `i` iff this is `≥ 0`.
    pub slack: Vec<i64>,
    pub aut_invariant: bool,
    pub is_zero: bool,
    pub all_positive: bool,
    /// Non-zero, every slack non-negative, every `n_i > 0`.
    pub satisfied: bool,
}

pub fn constraint_vector(g: &PlumbingGraph) -> ConstraintVector {
    ConstraintVector(
        (0..g.vertex_count())
            .map(|i| -(i64::from(g.valency(i)) + 2 * i64::from(g.vertex(i).genus)))
            .collect(),
    )
}

/// The left-hand side `(D + E + K)·E_i + 2` of the original inequality.
/// Kept separate from [`constraint_vector`] so the two forms can be
/// checked against each other.
pub fn adjunction_lhs(g: &PlumbingGraph, d: &Divisor) -> Vec<i64> {
    let dot = divisor_dot(g, d);
    (0..g.vertex_count())
        .map(|i| {
            let e_dot = g.vertex(i).euler + i64::from(g.valency(i));
            dot[i] as i64 + e_dot + g.canonical_degree(i) + 2
        })
        .collect()
}

/// `D·E_i` for every vertex.
fn divisor_dot(g: &PlumbingGraph, d: &Divisor) -> Vec<i128> {
    let m = d.as_i128();
    let r = g.vertex_count();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let entry = if i == j {
                        i128::from(g.vertex(i).euler)
                    } else {
                        i128::from(g.edge_multiplicity(i, j))
                    };
                    entry * m[j]
                })
                .sum()
        })
        .collect()
}

fn check_len(expected: usize, found: usize) -> Result<(), DivisorError> {
    if expected == found {
        Ok(())
    } else {
        Err(DivisorError::DimensionMismatch { expected, found })
    }
}

/// Vertex selection rule when several constraints are violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    LowestIndex,
    /// Uniformly random violated vertex, reproducible from the seed.
    Random(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DescentConfig {
    pub cap: u64,
    pub selection: Selection,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_DESCENT_CAP,
            selection: Selection::LowestIndex,
        }
    }
}

/// The componentwise-least effective `D ≠ 0` with `D·E_i ≤ c_i` for all `i`.
pub fn minimal_divisor(g: &PlumbingGraph) -> Result<Divisor, DivisorError> {
    minimal_divisor_with(g, DescentConfig::default())
}

/// Descent from `(1, …, 1)`: bump any vertex whose constraint fails until
/// none does.
///
/// Every feasible divisor dominates the current one at each step (if
/// `Z ≤ D` agree at `i` and `Z·E_i > c_i`, then `D·E_i ≥ Z·E_i > c_i`), so
/// the fixed point is the least feasible divisor whatever the order.
pub fn minimal_divisor_with(g: &PlumbingGraph, config: DescentConfig) -> Result<Divisor, DivisorError> {
    if !g.is_milnor_fillable() {
        return Err(DivisorError::NotNegativeDefinite);
    }
    let r = g.vertex_count();
    let bounds: Vec<i128> = constraint_vector(g).0.into_iter().map(i128::from).collect();
    let mut m = vec![1u64; r];
    let mut dot = divisor_dot(g, &Divisor(m.clone()));
    let mut total = r as u64;
    let mut rng = match config.selection {
        Selection::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Selection::LowestIndex => None,
    };
    let mut violated = Vec::with_capacity(r);
    loop {
        violated.clear();
        violated.extend((0..r).filter(|&i| dot[i] > bounds[i]));
        let pick = match (&mut rng, violated.first()) {
            (_, None) => return Ok(Divisor(m)),
            (None, Some(&i)) => i,
            (Some(rng), Some(_)) => *violated.choose(rng).expect("non-empty"),
        };
        if total >= config.cap {
            return Err(DivisorError::IterationCapExceeded { cap: config.cap });
        }
        m[pick] += 1;
        total += 1;
        for (j, d) in dot.iter_mut().enumerate() {
            *d += if j == pick {
                i128::from(g.vertex(j).euler)
            } else {
                i128::from(g.edge_multiplicity(j, pick))
            };
        }
    }
}

/// Visits every feasible non-zero effective divisor with entries `≤ bound`,
/// grouped by the first `r − 1` coordinates: the callback receives that
/// prefix and the inclusive range `lo..=hi` of feasible last coordinates.
///
/// Off-diagonal entries are non-negative, so once a fully assigned vertex
/// overshoots its bound no completion can recover, and an unassigned vertex
/// `j` needs room for `e_j · bound`; branches failing either are cut.
pub fn for_each_feasible_block(g: &PlumbingGraph, bound: u64, mut visit: impl FnMut(&[u64], u64, u64)) {
    let r = g.vertex_count();
    let matrix: Vec<Vec<i128>> = g
        .intersection_matrix()
        .rows()
        .into_iter()
        .map(|row| row.into_iter().map(i128::from).collect())
        .collect();
    let bounds: Vec<i128> = constraint_vector(g).0.into_iter().map(i128::from).collect();
    let mut prefix = Vec::with_capacity(r);
    let mut partial = vec![0i128; r];
    search_prefix(&matrix, &bounds, bound, &mut prefix, &mut partial, &mut visit);
}

fn search_prefix(
    matrix: &[Vec<i128>],
    bounds: &[i128],
    bound: u64,
    prefix: &mut Vec<u64>,
    partial: &mut [i128],
    visit: &mut impl FnMut(&[u64], u64, u64),
) {
    let r = matrix.len();
    let k = prefix.len();
    if k + 1 == r {
        if let Some((lo, hi)) = last_coordinate_range(matrix, bounds, bound, prefix, partial) {
            visit(prefix, lo, hi);
        }
        return;
    }
    for value in 0..=bound {
        let v = i128::from(value);
        for i in 0..r {
            partial[i] += matrix[i][k] * v;
        }
        // rows other than k only grow with `value`: once dead, stay dead
        let dead_for_good = (0..k).any(|i| partial[i] > bounds[i])
            || (k + 1..r).any(|j| partial[j] + matrix[j][j] * i128::from(bound) > bounds[j]);
        if dead_for_good {
            for i in 0..r {
                partial[i] -= matrix[i][k] * v;
            }
            break;
        }
        if partial[k] <= bounds[k] {
            prefix.push(value);
            search_prefix(matrix, bounds, bound, prefix, partial, visit);
            prefix.pop();
        }
        for i in 0..r {
            partial[i] -= matrix[i][k] * v;
        }
    }
}

fn last_coordinate_range(
    matrix: &[Vec<i128>],
    bounds: &[i128],
    bound: u64,
    prefix: &[u64],
    partial: &[i128],
) -> Option<(u64, u64)> {
    let k = matrix.len() - 1;
    let mut lo: i128 = if prefix.iter().all(|&m| m == 0) { 1 } else { 0 };
    let mut hi: i128 = i128::from(bound);
    for i in 0..=k {
        let slope = matrix[i][k];
        let room = bounds[i] - partial[i];
        match slope.signum() {
            0 if room < 0 => return None,
            0 => {}
            1 => hi = hi.min(room.div_euclid(slope)),
            // slope·m ≤ room with slope < 0  ⇔  m ≥ ⌈(−room) / (−slope)⌉
            _ => lo = lo.max(ceil_div(-room, -slope)),
        }
    }
    (lo <= hi).then_some((lo as u64, hi as u64))
}

fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

/// Exhaustive reference for [`minimal_divisor`]: the componentwise minimum
/// of all feasible divisors with entries `≤ bound`, which must itself be
/// feasible.
pub fn oracle_minimal_divisor(g: &PlumbingGraph, bound: u64) -> Result<Divisor, DivisorError> {
    if !g.is_milnor_fillable() {
        return Err(DivisorError::NotNegativeDefinite);
    }
    let r = g.vertex_count();
    let mut minimum: Option<Vec<u64>> = None;
    for_each_feasible_block(g, bound, |prefix, lo, _hi| {
        let point = prefix.iter().copied().chain(std::iter::once(lo));
        match &mut minimum {
            None => minimum = Some(point.collect()),
            Some(current) => {
                for (c, p) in current.iter_mut().zip(point) {
                    *c = (*c).min(p);
                }
            }
        }
    });
    let minimum = minimum.ok_or(DivisorError::BoundTooSmall { bound })?;
    debug_assert_eq!(minimum.len(), r);
    let candidate = Divisor(minimum);
    if is_feasible(g, &candidate) {
        Ok(candidate)
    } else {
        Err(DivisorError::MinimumNotFeasible {
            minimum: candidate.0,
        })
    }
}

/// Non-zero and `D·E_i ≤ c_i` at every vertex.
pub fn is_feasible(g: &PlumbingGraph, d: &Divisor) -> bool {
    d.len() == g.vertex_count()
        && !d.is_zero()
        && divisor_dot(g, d)
            .iter()
            .zip(constraint_vector(g).bounds())
            .all(|(&dot, &c)| dot <= i128::from(c))
}

pub fn binding_multiplicities(g: &PlumbingGraph, d: &Divisor) -> Result<MultiplicityVector, DivisorError> {
    check_len(g.vertex_count(), d.len())?;
    Ok(MultiplicityVector(
        divisor_dot(g, d).into_iter().map(|x| -x as i64).collect(),
    ))
}

/// Solves `I(Γ)·m = −n` exactly and returns `m` when it is an effective
/// integral divisor.
pub fn divisor_from_multiplicities(g: &PlumbingGraph, n: &MultiplicityVector) -> Result<Divisor, DivisorError> {
    let r = g.vertex_count();
    check_len(r, n.len())?;
    let matrix = g.intersection_matrix();
    let rhs: Vec<BigRational> = n
        .counts()
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(-x)))
        .collect();
    let solution = solve_rational(&matrix.rows(), rhs).ok_or(DivisorError::Singular)?;
    let mut m = Vec::with_capacity(r);
    for (vertex, value) in solution.into_iter().enumerate() {
        if !value.is_integer() {
            return Err(DivisorError::NonIntegralSolution {
                vertex,
                value: value.to_string(),
            });
        }
        if value.is_negative() {
            return Err(DivisorError::NonEffectiveSolution {
                vertex,
                value: value.to_string(),
            });
        }
        let int = value.to_integer().to_u64().ok_or_else(|| DivisorError::NonIntegralSolution {
            vertex,
            value: value.to_string(),
        })?;
        m.push(int);
    }
    Ok(Divisor(m))
}

/// Gauss–Jordan elimination over `Q`; `None` when the matrix is singular.
fn solve_rational(rows: &[Vec<i64>], rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .chain(std::iter::once(b))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, pivot);
        let inv = BigRational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].clone();
            for j in col..=n {
                let delta = &factor * &a[col][j];
                a[i][j] -= delta;
            }
        }
    }
    Some(a.into_iter().map(|mut row| row.pop().expect("augmented column")).collect())
}

/// Reports the per-vertex slack, the positivity of every `n_i` and whether
/// the whole automorphism group fixes `d`.
pub fn check_theorem_conditions(g: &PlumbingGraph, d: &Divisor) -> Result<DivisorReport, DivisorError> {
    let multiplicities = binding_multiplicities(g, d)?;
    let slack: Vec<i64> = constraint_vector(g)
        .bounds()
        .iter()
        .zip(multiplicities.counts())
        .map(|(&c, &n)| c + n)
        .collect();
    let aut_invariant = g
        .automorphism_group()
        .iter()
        .all(|sigma| sigma.act(d.multiplicities()) == d.multiplicities());
    let is_zero = d.is_zero();
    let all_positive = multiplicities.counts().iter().all(|&n| n > 0);
    let satisfied = !is_zero && all_positive && slack.iter().all(|&s| s >= 0);
    Ok(DivisorReport {
        divisor: d.clone(),
        multiplicities,
        slack,
        aut_invariant,
        is_zero,
        all_positive,
        satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::examples::*;

    #[test]
    fn constraint_examples() {
        assert_eq!(constraint_vector(&single(0, -2)).bounds(), &[0]);
        assert_eq!(constraint_vector(&chain(&[-2, -2])).bounds(), &[-1, -1]);
        assert_eq!(constraint_vector(&single(1, -1)).bounds(), &[-2]);
    }

    #[test]
    fn constraint_matches_adjunction_form() {
        let g = d4();
        let d = Divisor::new(vec![9, 5, 5, 5]);
        let lhs = adjunction_lhs(&g, &d);
        let slack = check_theorem_conditions(&g, &d).unwrap().slack;
        for (l, s) in lhs.iter().zip(&slack) {
            assert_eq!(*l, -s);
        }
    }

    #[test]
    fn minimal_divisor_examples() {
        assert_eq!(minimal_divisor(&single(0, -2)).unwrap(), Divisor::new(vec![1]));
        assert_eq!(minimal_divisor(&chain(&[-2, -2])).unwrap(), Divisor::new(vec![1, 1]));
        assert_eq!(minimal_divisor(&d4()).unwrap(), Divisor::new(vec![9, 5, 5, 5]));
        assert_eq!(minimal_divisor(&single(1, -1)).unwrap(), Divisor::new(vec![2]));
    }

    #[test]
    fn minimal_divisor_rejects_indefinite() {
        assert_eq!(minimal_divisor(&single(0, 1)), Err(DivisorError::NotNegativeDefinite));
        assert_eq!(minimal_divisor(&chain(&[-1, -1])), Err(DivisorError::NotNegativeDefinite));
    }

    #[test]
    fn descent_cap_is_enforced() {
        let config = DescentConfig {
            cap: 10,
            selection: Selection::LowestIndex,
        };
        assert_eq!(
            minimal_divisor_with(&d4(), config),
            Err(DivisorError::IterationCapExceeded { cap: 10 })
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_minimal_divisor(&single(0, -1), 5).unwrap(), Divisor::new(vec![1]));
        assert_eq!(oracle_minimal_divisor(&chain(&[-2, -2]), 5).unwrap(), Divisor::new(vec![1, 1]));
        assert_eq!(oracle_minimal_divisor(&single(1, -1), 5).unwrap(), Divisor::new(vec![2]));
        assert_eq!(oracle_minimal_divisor(&d4(), 12).unwrap(), Divisor::new(vec![9, 5, 5, 5]));
        assert_eq!(
            oracle_minimal_divisor(&d4(), 8),
            Err(DivisorError::BoundTooSmall { bound: 8 })
        );
    }

    #[test]
    fn multiplicity_examples() {
        let n = |g: &PlumbingGraph, d: Vec<u64>| binding_multiplicities(g, &Divisor::new(d)).unwrap();
        assert_eq!(n(&single(0, -2), vec![1]).counts(), &[2]);
        assert_eq!(n(&chain(&[-2, -2]), vec![1, 1]).counts(), &[1, 1]);
        assert_eq!(n(&d4(), vec![9, 5, 5, 5]).counts(), &[3, 1, 1, 1]);
        assert_eq!(
            binding_multiplicities(&d4(), &Divisor::new(vec![1])),
            Err(DivisorError::DimensionMismatch { expected: 4, found: 1 })
        );
    }

    #[test]
    fn inversion_examples() {
        let inv = |g: &PlumbingGraph, n: Vec<i64>| divisor_from_multiplicities(g, &MultiplicityVector::new(n));
        assert_eq!(inv(&single(0, -2), vec![2]).unwrap(), Divisor::new(vec![1]));
        assert_eq!(inv(&chain(&[-2, -2]), vec![1, 1]).unwrap(), Divisor::new(vec![1, 1]));
        assert_eq!(
            inv(&single(0, -2), vec![1]),
            Err(DivisorError::NonIntegralSolution {
                vertex: 0,
                value: "1/2".into()
            })
        );
        assert_eq!(
            inv(&single(0, -1), vec![-3]),
            Err(DivisorError::NonEffectiveSolution {
                vertex: 0,
                value: "-3".into()
            })
        );
        assert_eq!(inv(&single(0, 0), vec![1]), Err(DivisorError::Singular));
    }

    #[test]
    fn report_examples() {
        let g = chain(&[-2, -2]);
        let report = check_theorem_conditions(&g, &minimal_divisor(&g).unwrap()).unwrap();
        assert_eq!(report.slack, vec![0, 0]);
        assert_eq!(report.multiplicities.counts(), &[1, 1]);
        assert!(report.aut_invariant && report.satisfied);

        let zero = check_theorem_conditions(&g, &Divisor::zero(2)).unwrap();
        assert!(zero.is_zero && !zero.satisfied);

        let star = check_theorem_conditions(&d4(), &Divisor::new(vec![9, 5, 5, 5])).unwrap();
        assert!(star.aut_invariant && star.satisfied);
        let lopsided = check_theorem_conditions(&d4(), &Divisor::new(vec![9, 6, 5, 5])).unwrap();
        assert!(!lopsided.aut_invariant);
    }
}
