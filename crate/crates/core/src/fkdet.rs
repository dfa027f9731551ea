//! Monte Carlo estimates of Fuglede–Kadison determinants.
//!
//! Each generator is replaced by an independent random `N × N` unitary of
//! monomial type: a uniform permutation times a diagonal of uniform phases
//! (only the phases for abelian groups). `|det A|^{1/N}` is averaged in log
//! space over trials.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::TorsionValue;
use crate::error::{Error, Result};
use crate::groupring::{Matrix, RingElement};
use crate::oracle::derive_seed;

pub const MIN_SIZE: usize = 16;

/// Pivots below this fraction of the largest entry count as singular.
const SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FkEstimate {
    pub estimate: f64,
    pub stderr: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub discarded: usize,
    pub seed: u64,
}

/// A monomial matrix: row `i` has the single entry `phase[i]` in column
/// `col[i]`.
#[derive(Debug, Clone)]
struct Monomial {
    col: Vec<usize>,
    phase: Vec<Complex64>,
}

impl Monomial {
    fn identity(n: usize) -> Self {
        Monomial { col: (0..n).collect(), phase: vec![Complex64::new(1.0, 0.0); n] }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let col = self.col.iter().map(|&j| other.col[j]).collect();
        let phase = self.phase.iter().zip(&self.col).map(|(z, &j)| z * other.phase[j]).collect();
        Monomial { col, phase }
    }

    fn inverse(&self) -> Monomial {
        let n = self.col.len();
        let mut col = vec![0; n];
        let mut phase = vec![Complex64::new(0.0, 0.0); n];
        for (i, (&j, z)) in self.col.iter().zip(&self.phase).enumerate() {
            col[j] = i;
            phase[j] = z.conj();
        }
        Monomial { col, phase }
    }

    fn pow(&self, e: i64) -> Monomial {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Monomial::identity(self.col.len()), |acc, _| acc.mul(&base))
    }
}

/// One sample of the random model: a unitary per generator.
struct Model {
    n: usize,
    gens: Vec<Monomial>,
}

impl Model {
    fn sample(rank: usize, n: usize, permute: bool, rng: &mut ChaCha8Rng) -> Model {
        let gens = (0..rank)
            .map(|_| {
                let mut col: Vec<usize> = (0..n).collect();
                if permute {
                    col.shuffle(rng);
                }
                let phase = (0..n).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))).collect();
                Monomial { col, phase }
            })
            .collect();
        Model { n, gens }
    }

    /// Adds the model of `a` into the `n × n` block of `dense` at
    /// `(r0, c0)`, with row stride `stride`.
    fn add_element<R: RingElement>(&self, a: &R, dense: &mut [Complex64], stride: usize, r0: usize, c0: usize) {
        for (syllables, c) in a.syllable_terms() {
            let c = big_to_f64(&c);
            let m = syllables.iter().fold(Monomial::identity(self.n), |acc, &(g, e)| acc.mul(&self.gens[g - 1].pow(e)));
            for i in 0..self.n {
                dense[(r0 + i) * stride + c0 + m.col[i]] += c * m.phase[i];
            }
        }
    }

    fn log_abs_det<R: RingElement>(&self, m: &Matrix<R>) -> Option<f64> {
        let size = m.rows() * self.n;
        let mut dense = vec![Complex64::new(0.0, 0.0); size * size];
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                self.add_element(m.get(i, j), &mut dense, size, i * self.n, j * self.n);
            }
        }
        lu_log_abs_det(&mut dense, size)
    }
}

fn big_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// `log |det|` by LU with partial pivoting, or `None` when a pivot falls
/// below the singularity threshold.
fn lu_log_abs_det(a: &mut [Complex64], n: usize) -> Option<f64> {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let tol = SINGULAR_TOL * scale;
    let mut log = 0.0;
    for k in 0..n {
        let (p, best) = (k..n).map(|i| (i, a[i * n + k].norm())).fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best < tol {
            return None;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
        }
        let pivot = a[k * n + k];
        log += pivot.norm().ln();
        let (head, tail) = a.split_at_mut((k + 1) * n);
        let pivot_row = &head[k * n..];
        for row in tail.chunks_mut(n) {
            let f = row[k] / pivot;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                row[j] -= f * pivot_row[j];
            }
        }
    }
    Some(log)
}

fn check_params(n: usize, trials: usize) -> Result<()> {
    if n < MIN_SIZE {
        return Err(Error::Schema(format!("matrix size N must be at least {MIN_SIZE}, got {n}")));
    }
    if trials == 0 {
        return Err(Error::Schema("at least one trial is required".into()));
    }
    Ok(())
}

/// Runs `trials` independent samples of `per_trial` and aggregates the
/// per-site log determinants.
fn aggregate(n: usize, trials: usize, seed: u64, per_trial: impl Fn(&Model) -> Option<f64> + Sync, rank: usize, permute: bool) -> Result<FkEstimate> {
    let logs: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, n, t));
            let model = Model::sample(rank, n, permute, &mut rng);
            per_trial(&model).map(|l| l / n as f64)
        })
        .collect();
    let kept: Vec<f64> = logs.iter().flatten().copied().collect();
    let discarded = trials - kept.len();
    if kept.is_empty() || 2 * discarded > trials {
        return Err(Error::EstimationFailed(format!("{discarded} of {trials} trials were numerically singular")));
    }
    let k = kept.len() as f64;
    let mean = kept.iter().sum::<f64>() / k;
    let var = if kept.len() > 1 { kept.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
    let estimate = mean.exp();
    Ok(FkEstimate { estimate, stderr: estimate * (var / k).sqrt(), n, trials, discarded, seed })
}

/// Estimates `det_FK(a)`.
pub fn estimate_fk<R: RingElement>(a: &R, n: usize, trials: usize, seed: u64) -> Result<FkEstimate> {
    check_params(n, trials)?;
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let m = Matrix::from_entries(1, 1, a.rank(), vec![a.clone()])?;
    aggregate(n, trials, seed, |model| model.log_abs_det(&m), a.rank(), !R::COMMUTATIVE)
}

/// Estimates `det_FK` of a torsion value: the element representative when
/// present, otherwise the alternating product over the factors. Each trial
/// uses one sample for all factors.
pub fn fk_of_torsion<R: RingElement>(tau: &TorsionValue<R>, n: usize, trials: usize, seed: u64) -> Result<FkEstimate> {
    check_params(n, trials)?;
    let product = tau.product().ok_or(Error::ZeroElement)?;
    let rank = product.factors.first().map(|f| f.matrix.rank()).or_else(|| tau.element_rep().map(|r| r.numerator.rank())).unwrap_or(0);
    let parts: Vec<(Matrix<R>, i8)> = match &product.invariants.element_rep {
        Some(rep) => vec![
            (Matrix::from_entries(1, 1, rank, vec![rep.numerator.clone()])?, 1),
            (Matrix::from_entries(1, 1, rank, vec![rep.denominator.clone()])?, -1),
        ],
        None => product.factors.iter().map(|f| (f.matrix.clone(), f.exponent)).collect(),
    };
    aggregate(
        n,
        trials,
        seed,
        |model| parts.iter().map(|(m, e)| model.log_abs_det(m).map(|l| f64::from(*e) * l)).sum::<Option<f64>>(),
        rank,
        !R::COMMUTATIVE,
    )
}

/// `(n−1)^{(n−1)/2} / n^{(n−2)/2}`, the chain-link closed form.
pub fn chainlink_closed_form(n: usize) -> f64 {
    let n = n as f64;
    (n - 1.0).powf((n - 1.0) / 2.0) / n.powf((n - 2.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::GroupRingElt;

    #[test]
    fn trivial_values() {
        let w = GroupRingElt::parse(2, "-x1 x2^-1 x1").unwrap();
        let e = estimate_fk(&w, 32, 4, 1).unwrap();
        assert!((e.estimate - 1.0).abs() < 1e-12);
        let two = GroupRingElt::parse(2, "2").unwrap();
        assert!((estimate_fk(&two, 32, 4, 1).unwrap().estimate - 2.0).abs() < 1e-12);
    }

    #[test]
    fn parameter_errors() {
        let one = GroupRingElt::one(1);
        assert!(estimate_fk(&one, 8, 4, 1).is_err());
        assert!(estimate_fk(&one, 32, 0, 1).is_err());
        assert!(estimate_fk(&GroupRingElt::zero(1), 32, 4, 1).is_err());
    }

    #[test]
    fn deterministic() {
        let a = GroupRingElt::parse(2, "1 + x1 + x2").unwrap();
        assert_eq!(estimate_fk(&a, 64, 3, 7).unwrap(), estimate_fk(&a, 64, 3, 7).unwrap());
    }

    #[test]
    fn chain_link_small() {
        let a = crate::catalog::chainlink_element(3).unwrap();
        let e = estimate_fk(&a, 128, 6, 11).unwrap();
        assert!((e.estimate / chainlink_closed_form(3) - 1.0).abs() < 0.05, "{e:?}");
    }

    #[test]
    fn monomial_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = Model::sample(1, 8, true, &mut rng);
        let g = &m.gens[0];
        let id = g.mul(&g.inverse());
        assert_eq!(id.col, (0..8).collect::<Vec<_>>());
        assert!(id.phase.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12));
        assert_eq!(g.pow(3).col, g.mul(g).mul(g).col);
    }
}
