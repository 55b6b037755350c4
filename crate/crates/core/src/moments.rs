//! Exact purity statistics of Haar-random bipartite pure states, and the
//! ensemble metrics that measure how close a generator gets to them.
//!
//! Closed forms are evaluated in arbitrary-precision rationals; the factorial
//! prefactors of the general moment formula are far outside `f64` range for
//! the dimensions of interest.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::stats;
use crate::{Error, Result};

pub const MAX_MOMENT_ORDER: u32 = 4;

/// Subsystem dimensions with `N_A ≤ N_B` (swapped on construction).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartitionDims {
    na: u64,
    nb: u64,
}

impl BipartitionDims {
    pub fn new(na: u64, nb: u64) -> Result<Self> {
        if na == 0 || nb == 0 {
            return Err(Error::InvalidArgument(format!("dimensions must be positive, got ({na}, {nb})")));
        }
        Ok(Self { na: na.min(nb), nb: na.max(nb) })
    }

    /// `n_a` kept qubits out of `n`.
    pub fn from_qubits(n: u32, n_a: u32) -> Result<Self> {
        if n_a > n || n > 62 {
            return Err(Error::InvalidArgument(format!("invalid split {n_a} of {n} qubits")));
        }
        Self::new(1 << n_a, 1 << (n - n_a))
    }

    pub fn na(&self) -> u64 {
        self.na
    }

    pub fn nb(&self) -> u64 {
        self.nb
    }
}

fn int(v: u64) -> BigInt {
    BigInt::from(v)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `⟨R⟩ = (N_A + N_B) / (1 + N_A N_B)`.
pub fn exact_mean_purity(d: BipartitionDims) -> BigRational {
    ratio(int(d.na + d.nb), int(1 + d.na * d.nb))
}

/// `Var R = 2(N_A² − 1)(N_B² − 1) / [(1 + N_A N_B)² (2 + N_A N_B)(3 + N_A N_B)]`.
pub fn exact_variance_purity(d: BipartitionDims) -> BigRational {
    let (a, b) = (int(d.na), int(d.nb));
    let ab = &a * &b;
    let one = BigInt::one();
    let num = BigInt::from(2) * (&a * &a - &one) * (&b * &b - &one);
    let den = (&one + &ab) * (&one + &ab) * (BigInt::from(2) + &ab) * (BigInt::from(3) + &ab);
    ratio(num, den)
}

/// All compositions of `total` into `parts` nonnegative integers, in
/// lexicographic order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(left - k, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// The pairwise factor `1 − 2 n_i / (2 n_j + i − j)` for `j < i` (1-based
/// positions in the composition).
fn pair_factor(n_i: u32, n_j: u32, i: usize, j: usize, composition: &[u32]) -> Result<BigRational> {
    let den = 2 * i64::from(n_j) + i as i64 - j as i64;
    if den == 0 {
        return Err(Error::ZeroDenominator { composition: composition.to_vec() });
    }
    Ok(BigRational::one() - ratio(BigInt::from(2 * n_i), BigInt::from(den)))
}

/// `⟨R^order⟩` for a Haar-random state, summing over compositions
/// `n_1 + … + n_{N_A} = order`.
pub fn purity_moment(order: u32, d: BipartitionDims) -> Result<BigRational> {
    if order == 0 || order > MAX_MOMENT_ORDER {
        return Err(Error::InvalidArgument(format!(
            "moment order must be in 1..={MAX_MOMENT_ORDER}, got {order}"
        )));
    }
    let (na, nb) = (d.na, d.nb);
    let parts = usize::try_from(na).map_err(|_| Error::InvalidArgument("N_A too large".into()))?;
    let order_fact = factorial(u64::from(order));
    let mut total = BigRational::zero();
    for comp in compositions(order, parts) {
        let multinomial = comp.iter().fold(order_fact.clone(), |acc, &k| acc / factorial(u64::from(k)));
        let mut term = BigRational::from_integer(multinomial);
        for (idx, &n_i) in comp.iter().enumerate() {
            if n_i == 0 {
                continue;
            }
            let i = idx as u64 + 1;
            let two_n = 2 * u64::from(n_i);
            let num = factorial(nb + two_n - i) * factorial(na + two_n - i);
            let den = factorial(nb - i) * factorial(na - i) * factorial(two_n);
            term *= ratio(num, den);
            for (jdx, &n_j) in comp.iter().enumerate().take(idx) {
                term *= pair_factor(n_i, n_j, idx + 1, jdx + 1, &comp)?;
            }
        }
        total += term;
    }
    let prefactor = ratio(factorial(na * nb - 1), factorial(na * nb + 2 * u64::from(order) - 1));
    Ok(prefactor * total)
}

/// CDF of the purity `R = x² + (1 − x)²` of one qubit of a Haar-random
/// two-qubit state, where the Schmidt weight `x` has density `3(2x − 1)²`:
/// `P(R ≤ r) = (2r − 1)^{3/2}`.
pub fn two_qubit_purity_cdf(r: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("two-qubit purity {r} outside [1/2, 1]")));
    }
    Ok((2.0 * r - 1.0).powf(1.5))
}

/// Sample moments for one bipartition size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartitionStats {
    pub n_a: u32,
    pub mean: f64,
    pub variance: f64,
}

/// Sample purity statistics of a generated ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub n_qubits: u32,
    pub ensemble_size: usize,
    pub method: String,
    pub layers: usize,
    pub seed: u64,
    pub bipartitions: Vec<BipartitionStats>,
}

impl EnsembleReport {
    /// Builds the report from `purities[member][n_a − 1]` for
    /// `n_a = 1..n−1`, using the unbiased sample variance.
    pub fn from_purities(
        n_qubits: u32,
        purities: &[Vec<f64>],
        method: impl Into<String>,
        layers: usize,
        seed: u64,
    ) -> Result<Self> {
        if purities.len() < 2 {
            return Err(Error::InsufficientData("ensemble variance needs at least two members".into()));
        }
        let width = n_qubits.saturating_sub(1) as usize;
        if purities.iter().any(|row| row.len() != width) {
            return Err(Error::InsufficientData(format!(
                "every member needs {width} bipartition purities"
            )));
        }
        let bipartitions = (0..width)
            .map(|k| {
                let column: Vec<f64> = purities.iter().map(|row| row[k]).collect();
                BipartitionStats {
                    n_a: k as u32 + 1,
                    mean: stats::mean(&column),
                    variance: stats::sample_variance(&column),
                }
            })
            .collect();
        Ok(Self {
            n_qubits,
            ensemble_size: purities.len(),
            method: method.into(),
            layers,
            seed,
            bipartitions,
        })
    }

    pub fn get(&self, n_a: u32) -> Option<&BipartitionStats> {
        self.bipartitions.iter().find(|b| b.n_a == n_a)
    }
}

/// Average relative errors `(Δ̄_μ, Δ̄_σ²)` of the sample mean and variance
/// against the Haar values, over `n_a = 1..n−1`.
pub fn relative_errors(report: &EnsembleReport) -> Result<(f64, f64)> {
    let n = report.n_qubits;
    if n < 2 {
        return Err(Error::InvalidArgument("relative errors need at least two qubits".into()));
    }
    let (mut dmu, mut dvar) = (0.0, 0.0);
    for n_a in 1..n {
        let entry = report.get(n_a).ok_or(Error::MissingBipartition(n_a as usize))?;
        let dims = BipartitionDims::from_qubits(n, n_a)?;
        let mu = to_f64(&exact_mean_purity(dims));
        let var = to_f64(&exact_variance_purity(dims));
        dmu += (entry.mean - mu).abs() / mu;
        dvar += (entry.variance - var).abs() / var;
    }
    let k = f64::from(n - 1);
    Ok((dmu / k, dvar / k))
}
