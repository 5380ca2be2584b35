//! Four-party polarization analysis and the local-hidden-variable tensor test.
//!
//! Each party measures in the basis `|m, φ> = (|V> + m e^{-iφ} |H>)/√2` with
//! outcome `m = ±1` and chooses between two phase settings. The correlation
//! function sampled on the resulting 2⁴ setting grid is expanded over the
//! per-party vectors `v¹ = (1, 1)`, `v² = (1, -1)`; an LHV model must keep the
//! sum of the absolute expansion coefficients at or below one.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::postselect::QubitRegister;
use crate::scalar::Real;

pub const PARTIES: usize = 4;
const GRID: usize = 1 << PARTIES;

/// One analyzer outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// Outcomes `(m₁, m₂, m₃, m₄)` of all four analyzers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnalyzerOutcome(pub [Sign; PARTIES]);

impl AnalyzerOutcome {
    /// All sixteen outcomes; bit set means `Minus`, party 1 most significant.
    pub fn all() -> impl Iterator<Item = AnalyzerOutcome> {
        (0..GRID).map(|i| {
            AnalyzerOutcome(std::array::from_fn(|x| {
                if (i >> (PARTIES - 1 - x)) & 1 == 0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            }))
        })
    }

    /// `m₁ m₂ m₃ m₄`.
    pub fn parity<T: Real>(&self) -> T {
        self.0.iter().fold(T::one(), |acc, s| acc * s.value::<T>())
    }
}

/// Analyzer eigenstate as `[H amplitude, V amplitude]`.
pub fn analyzer_state<T: Real>(m: Sign, phi: T) -> [Complex<T>; 2] {
    let h = T::FRAC_1_SQRT_2();
    [
        Complex::from_polar(h, -phi) * m.value::<T>(),
        Complex::new(h, T::zero()),
    ]
}

/// Two phase settings per party; index 0 is `φ¹` (k = 1), index 1 is `φ²` (k = 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSettings<T: Real> {
    pairs: [[T; 2]; PARTIES],
}

impl<T: Real> PhaseSettings<T> {
    pub fn new(pairs: [[T; 2]; PARTIES]) -> Result<Self> {
        if pairs.iter().flatten().any(|p| !p.is_finite()) {
            return Err(Error::Settings("phases must be finite".into()));
        }
        Ok(PhaseSettings { pairs })
    }

    /// `φ₁ ∈ {0, π/2}`, `φ₂,₃,₄ ∈ {-π/4, π/4}`.
    pub fn standard() -> Self {
        let q = T::FRAC_PI_4();
        PhaseSettings {
            pairs: [[T::zero(), T::FRAC_PI_2()], [-q, q], [-q, q], [-q, q]],
        }
    }

    pub fn pairs(&self) -> &[[T; 2]; PARTIES] {
        &self.pairs
    }

    /// Phases at grid point `j`: bit `x` (party 1 most significant) picks `φ_x^{1+bit}`.
    pub fn grid_phases(&self, j: usize) -> [T; PARTIES] {
        std::array::from_fn(|x| self.pairs[x][(j >> (PARTIES - 1 - x)) & 1])
    }

    /// Swaps the two settings of `party` (0-based).
    pub fn swapped(&self, party: usize) -> Self {
        let mut pairs = self.pairs;
        pairs[party].swap(0, 1);
        PhaseSettings { pairs }
    }
}

/// Anything that assigns probabilities to analyzer outcomes.
pub trait OutcomeModel<T: Real> {
    fn outcome_probability(&self, outcome: &AnalyzerOutcome, phases: &[T; PARTIES]) -> T;
}

/// A pure four-party register.
#[derive(Debug, Clone, PartialEq)]
pub struct FourPartyRegister<T: Real>(QubitRegister<T>);

impl<T: Real> FourPartyRegister<T> {
    pub fn new(register: QubitRegister<T>) -> Result<Self> {
        if register.len() != PARTIES {
            return Err(Error::PartyCount {
                expected: PARTIES,
                found: register.len(),
            });
        }
        Ok(FourPartyRegister(register))
    }

    pub fn register(&self) -> &QubitRegister<T> {
        &self.0
    }

    /// `<m₁,φ₁|<m₂,φ₂|<m₃,φ₃|<m₄,φ₄|ψ>`.
    pub fn projection(&self, outcome: &AnalyzerOutcome, phases: &[T; PARTIES]) -> Complex<T> {
        let bras: [[Complex<T>; 2]; PARTIES] = std::array::from_fn(|x| {
            let [h, v] = analyzer_state(outcome.0[x], phases[x]);
            [h.conj(), v.conj()]
        });
        let mut acc = Complex::zero();
        for (index, amp) in self.0.amplitudes().iter().enumerate() {
            let weight = (0..PARTIES).fold(Complex::new(T::one(), T::zero()), |w, x| {
                w * bras[x][(index >> (PARTIES - 1 - x)) & 1]
            });
            acc += weight * amp;
        }
        acc
    }
}

impl<T: Real> TryFrom<QubitRegister<T>> for FourPartyRegister<T> {
    type Error = Error;

    fn try_from(register: QubitRegister<T>) -> Result<Self> {
        Self::new(register)
    }
}

impl<T: Real> OutcomeModel<T> for FourPartyRegister<T> {
    fn outcome_probability(&self, outcome: &AnalyzerOutcome, phases: &[T; PARTIES]) -> T {
        self.projection(outcome, phases).norm_sqr()
    }
}

/// `V |ψ><ψ| + (1 - V) I/16`.
#[derive(Debug, Clone, PartialEq)]
pub struct WhiteNoiseMixture<T: Real> {
    pub state: FourPartyRegister<T>,
    pub visibility: T,
}

impl<T: Real> OutcomeModel<T> for WhiteNoiseMixture<T> {
    fn outcome_probability(&self, outcome: &AnalyzerOutcome, phases: &[T; PARTIES]) -> T {
        let uniform = T::one() / T::from_usize(GRID).unwrap();
        self.visibility * self.state.outcome_probability(outcome, phases)
            + (T::one() - self.visibility) * uniform
    }
}

/// Free-function form of [`OutcomeModel::outcome_probability`].
pub fn outcome_probability<T: Real, M: OutcomeModel<T>>(
    model: &M,
    outcome: &AnalyzerOutcome,
    phases: &[T; PARTIES],
) -> T {
    model.outcome_probability(outcome, phases)
}

/// `E(φ) = Σ_m m₁m₂m₃m₄ P(m | φ)`.
pub fn correlation<T: Real, M: OutcomeModel<T>>(model: &M, phases: &[T; PARTIES]) -> T {
    AnalyzerOutcome::all().fold(T::zero(), |acc, o| {
        acc + o.parity::<T>() * model.outcome_probability(&o, phases)
    })
}

/// `4/5 cos(φ₁+φ₂+φ₃+φ₄) + 1/5 cos(φ₁-φ₂-φ₃+φ₄)`, the correlation of the
/// two-GHZ superposition register.
pub fn closed_form_correlation_superposition<T: Real>(phases: &[T; PARTIES]) -> T {
    let [a, b, c, d] = *phases;
    T::lit(0.8) * (a + b + c + d).cos() + T::lit(0.2) * (a - b - c + d).cos()
}

/// Expansion coefficients `q_{k₁k₂k₃k₄}` of the sampled correlation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor<T: Real> {
    q: [T; GRID],
    samples: [T; GRID],
    settings: PhaseSettings<T>,
}

/// `(v^k)_j` for 0-based `k, j`.
fn basis<T: Real>(k: usize, j: usize) -> T {
    if k == 1 && j == 1 {
        -T::one()
    } else {
        T::one()
    }
}

fn tensor_weight<T: Real>(k: usize, j: usize) -> T {
    (0..PARTIES).fold(T::one(), |w, x| {
        let shift = PARTIES - 1 - x;
        w * basis::<T>((k >> shift) & 1, (j >> shift) & 1)
    })
}

impl<T: Real> CorrelationTensor<T> {
    /// Inverts the expansion of a sampled grid; along each axis the inverse of
    /// `[[1, 1], [1, -1]]` is half of itself, hence the global `1/16`.
    pub fn from_samples(samples: [T; GRID], settings: PhaseSettings<T>) -> Self {
        let scale = T::one() / T::from_usize(GRID).unwrap();
        let q = std::array::from_fn(|k| {
            (0..GRID).fold(T::zero(), |acc, j| {
                acc + samples[j] * tensor_weight::<T>(k, j)
            }) * scale
        });
        CorrelationTensor {
            q,
            samples,
            settings,
        }
    }

    /// Coefficients in `k₁k₂k₃k₄` row-major order (`k₁` slowest).
    pub fn coefficients(&self) -> &[T; GRID] {
        &self.q
    }

    /// `q_{k₁k₂k₃k₄}` with 1-based `k_x ∈ {1, 2}`.
    pub fn q(&self, k: [usize; PARTIES]) -> T {
        let index = k.iter().fold(0, |acc, &kx| {
            assert!(kx == 1 || kx == 2, "tensor index must be 1 or 2");
            (acc << 1) | (kx - 1)
        });
        self.q[index]
    }

    pub fn samples(&self) -> &[T; GRID] {
        &self.samples
    }

    pub fn settings(&self) -> &PhaseSettings<T> {
        &self.settings
    }

    /// `E_j = Σ_k q_k Π_x (v^{k_x})_{j_x}`.
    pub fn reconstruct(&self) -> [T; GRID] {
        std::array::from_fn(|j| {
            (0..GRID).fold(T::zero(), |acc, k| {
                acc + self.q[k] * tensor_weight::<T>(k, j)
            })
        })
    }

    pub fn round_trip_error(&self) -> T {
        self.reconstruct()
            .iter()
            .zip(&self.samples)
            .fold(T::zero(), |worst, (r, s)| worst.max((*r - *s).abs()))
    }
}

/// Samples the correlation on the settings grid and expands it.
pub fn correlation_tensor<T: Real, M: OutcomeModel<T>>(
    model: &M,
    settings: &PhaseSettings<T>,
) -> CorrelationTensor<T> {
    let samples = std::array::from_fn(|j| correlation(model, &settings.grid_phases(j)));
    CorrelationTensor::from_samples(samples, *settings)
}

/// `Σ |q|`.
pub fn lhv_sum<T: Real>(tensor: &CorrelationTensor<T>) -> T {
    tensor.q.iter().fold(T::zero(), |acc, q| acc + q.abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellVerdict<T> {
    pub sum: T,
    pub violated: bool,
    /// `sum - 1`.
    pub margin: T,
}

pub fn bell_verdict<T: Real>(tensor: &CorrelationTensor<T>) -> BellVerdict<T> {
    let sum = lhv_sum(tensor);
    BellVerdict {
        sum,
        violated: sum > T::one() + T::tolerance(),
        margin: sum - T::one(),
    }
}

/// Smallest white-noise visibility `V` with `V Σ|q| = 1`.
///
/// White noise contributes zero correlation at every setting, so `Σ|q|` scales
/// linearly with `V`.
pub fn critical_visibility<T: Real>(tensor: &CorrelationTensor<T>) -> Result<T> {
    let sum = lhv_sum(tensor);
    if sum <= T::tolerance() {
        return Err(Error::DegenerateTensor);
    }
    Ok(sum.recip())
}
