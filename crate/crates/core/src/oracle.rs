//! Reference path: commutative creation-operator polynomials.
//!
//! Sources are written as polynomials in creation operators, every optical element
//! as a substitution rule on those operators, and only the final polynomial is
//! applied to the vacuum. None of this goes through [`crate::optics`], so it can
//! referee the state-evolution path term by term.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{FockState, Mode, OccupationVector};
use crate::scalar::{real, Real};

/// A coefficient times a product of creation operators (sorted, repeats allowed).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMonomial<T: Real> {
    pub factors: Vec<Mode>,
    pub coefficient: Complex<T>,
}

impl<T: Real> OperatorMonomial<T> {
    pub fn new(mut factors: Vec<Mode>, coefficient: Complex<T>) -> Self {
        factors.sort();
        OperatorMonomial {
            factors,
            coefficient,
        }
    }
}

/// Substitution table: each mode maps to a linear combination of modes.
pub type Rules<T> = BTreeMap<Mode, Vec<(Mode, Complex<T>)>>;

/// Sum of monomials keyed by their sorted factor list.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPolynomial<T: Real> {
    monomials: BTreeMap<Vec<Mode>, Complex<T>>,
}

impl<T: Real> Default for OperatorPolynomial<T> {
    fn default() -> Self {
        OperatorPolynomial {
            monomials: BTreeMap::new(),
        }
    }
}

impl<T: Real> OperatorPolynomial<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial `1`.
    pub fn unit() -> Self {
        Self::from_monomials([OperatorMonomial::new(vec![], Complex::one())])
    }

    /// A single creation operator.
    pub fn creation(mode: Mode) -> Self {
        Self::from_monomials([OperatorMonomial::new(vec![mode], Complex::one())])
    }

    pub fn from_monomials<I: IntoIterator<Item = OperatorMonomial<T>>>(monomials: I) -> Self {
        let mut p = Self::zero();
        for m in monomials {
            p.accumulate(m.factors, m.coefficient);
        }
        p.cleaned()
    }

    /// Reads a Fock state back as the polynomial that creates it from vacuum.
    pub fn from_fock(state: &FockState<T>) -> Self {
        let mut p = Self::zero();
        for (occ, &amp) in state.terms() {
            let mut factors = Vec::new();
            let mut norm = T::one();
            for (mode, n) in occ.iter() {
                for k in 1..=n {
                    factors.push(mode.clone());
                    norm *= T::from_u32(k).unwrap();
                }
            }
            p.accumulate(factors, amp / norm.sqrt());
        }
        p.cleaned()
    }

    fn accumulate(&mut self, mut factors: Vec<Mode>, c: Complex<T>) {
        factors.sort();
        *self.monomials.entry(factors).or_insert_with(Complex::zero) += c;
    }

    fn cleaned(mut self) -> Self {
        self.monomials.retain(|_, c| !c.is_zero());
        self
    }

    pub fn monomials(&self) -> impl Iterator<Item = OperatorMonomial<T>> + '_ {
        self.monomials.iter().map(|(f, &c)| OperatorMonomial {
            factors: f.clone(),
            coefficient: c,
        })
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Coefficient of the monomial with the given factors (any order).
    pub fn coefficient(&self, factors: &[Mode]) -> Complex<T> {
        let mut key = factors.to_vec();
        key.sort();
        self.monomials
            .get(&key)
            .copied()
            .unwrap_or_else(Complex::zero)
    }

    /// Degrees of all monomials, ascending and deduplicated.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.monomials.keys().map(Vec::len).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        OperatorPolynomial {
            monomials: self
                .monomials
                .iter()
                .map(|(f, &a)| (f.clone(), a * c))
                .collect(),
        }
        .cleaned()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (f, &c) in &other.monomials {
            p.accumulate(f.clone(), c);
        }
        p.cleaned()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (fa, &ca) in &self.monomials {
            for (fb, &cb) in &other.monomials {
                let mut f = fa.clone();
                f.extend(fb.iter().cloned());
                p.accumulate(f, ca * cb);
            }
        }
        p.cleaned()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::unit(), |acc, _| acc.mul(self))
    }

    /// Replaces every operator by its rule image simultaneously and re-expands.
    pub fn substitute(&self, rules: &Rules<T>) -> Result<Self> {
        let mut images: BTreeMap<&Mode, Self> = BTreeMap::new();
        for f in self.monomials.keys().flatten() {
            if images.contains_key(f) {
                continue;
            }
            let rule = rules
                .get(f)
                .ok_or_else(|| Error::Mode(format!("no substitution rule for `{f}`")))?;
            let image = rule.iter().fold(Self::zero(), |acc, (m, c)| {
                acc.add(&Self::creation(m.clone()).scale(*c))
            });
            images.insert(f, image);
        }
        let mut out = Self::zero();
        for (factors, &c) in &self.monomials {
            let term = factors
                .iter()
                .fold(Self::unit().scale(c), |acc, f| acc.mul(&images[f]));
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Applies the polynomial to the vacuum: `Π (a_m†)^k |0> = Π √(k!) |k>`.
    pub fn to_fock(&self) -> Result<FockState<T>> {
        let mut terms: BTreeMap<OccupationVector, Complex<T>> = BTreeMap::new();
        let mut degree = None;
        for (factors, &c) in &self.monomials {
            match degree {
                None => degree = Some(factors.len()),
                Some(d) if d != factors.len() => {
                    return Err(Error::PhotonNumberMismatch {
                        left: d as u32,
                        right: factors.len() as u32,
                    })
                }
                _ => {}
            }
            let mut counts: BTreeMap<&Mode, u32> = BTreeMap::new();
            for f in factors {
                *counts.entry(f).or_insert(0) += 1;
            }
            let ladder = counts.values().fold(T::one(), |acc, &k| {
                (1..=k).fold(acc, |a, j| a * T::from_u32(j).unwrap())
            });
            let occ =
                OccupationVector::from_counts(counts.into_iter().map(|(m, k)| (m.clone(), k)));
            *terms.entry(occ).or_insert_with(Complex::zero) += c * ladder.sqrt();
        }
        FockState::from_terms(degree.unwrap_or(0) as u32, terms)
    }
}

/// Commutative polynomial power.
pub fn poly_pow<T: Real>(p: &OperatorPolynomial<T>, n: u32) -> OperatorPolynomial<T> {
    p.pow(n)
}

pub fn substitute<T: Real>(
    p: &OperatorPolynomial<T>,
    rules: &Rules<T>,
) -> Result<OperatorPolynomial<T>> {
    p.substitute(rules)
}

pub fn to_fock<T: Real>(p: &OperatorPolynomial<T>) -> Result<FockState<T>> {
    p.to_fock()
}

/// `(a1H† a2V† - a1V† a2H†)² / (2√3)`.
pub fn source_polynomial<T: Real>(a1: &str, a2: &str) -> OperatorPolynomial<T> {
    let c = |m: Mode| OperatorPolynomial::creation(m);
    let pair = c(Mode::h(a1))
        .mul(&c(Mode::v(a2)))
        .add(&c(Mode::v(a1)).mul(&c(Mode::h(a2))).scale(-Complex::one()));
    let prefactor = T::one() / (T::lit(2.0) * T::lit(3.0).sqrt());
    pair.pow(2).scale(real(prefactor))
}

fn rule<T: Real>(rules: &mut Rules<T>, from: Mode, to: &[(Mode, T)]) {
    rules.insert(
        from,
        to.iter().map(|(m, c)| (m.clone(), real(*c))).collect(),
    );
}

/// Hand-written substitution tables for the two generation schemes, applied to the
/// source polynomial in order (optional wave plate, splitters, PBS).
pub fn scheme_polynomial<T: Real>(with_wave_plate: bool) -> OperatorPolynomial<T> {
    let s = T::FRAC_1_SQRT_2();
    let one = T::one();
    let mut p = source_polynomial::<T>("a1", "a2");

    if with_wave_plate {
        let mut hwp = Rules::new();
        rule(&mut hwp, Mode::h("a1"), &[(Mode::h("a1"), one)]);
        rule(&mut hwp, Mode::v("a1"), &[(Mode::v("a1"), one)]);
        rule(&mut hwp, Mode::h("a2"), &[(Mode::v("a2"), one)]);
        rule(&mut hwp, Mode::v("a2"), &[(Mode::h("a2"), one)]);
        p = p
            .substitute(&hwp)
            .expect("wave-plate rules cover the source");
    }

    // a1 -> (d1 + D1)/√2, a2 -> (d4 - D2)/√2, then the PBS:
    // D1H -> d3H, D1V -> d2V, D2H -> d2H, D2V -> d3V. Composed into one table.
    let mut optics = Rules::new();
    rule(
        &mut optics,
        Mode::h("a1"),
        &[(Mode::h("d1"), s), (Mode::h("d3"), s)],
    );
    rule(
        &mut optics,
        Mode::v("a1"),
        &[(Mode::v("d1"), s), (Mode::v("d2"), s)],
    );
    rule(
        &mut optics,
        Mode::h("a2"),
        &[(Mode::h("d4"), s), (Mode::h("d2"), -s)],
    );
    rule(
        &mut optics,
        Mode::v("a2"),
        &[(Mode::v("d4"), s), (Mode::v("d3"), -s)],
    );
    p.substitute(&optics)
        .expect("optics rules cover the source")
}

/// Amplitudes of the sixteen one-photon-per-mode polarization patterns over
/// `parties`, H = bit 0, first party most significant. Not normalized.
pub fn coincidence_amplitudes<T: Real>(
    p: &OperatorPolynomial<T>,
    parties: &[&str],
) -> Vec<Complex<T>> {
    let n = parties.len();
    (0..1usize << n)
        .map(|index| {
            let factors: Vec<Mode> = parties
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    if (index >> (n - 1 - i)) & 1 == 0 {
                        Mode::h(*s)
                    } else {
                        Mode::v(*s)
                    }
                })
                .collect();
            // Distinct modes, so the ladder factor is 1.
            p.coefficient(&factors)
        })
        .collect()
}

/// Coincidence probability of a scheme, computed entirely on the polynomial side.
pub fn scheme_success_probability<T: Real>(with_wave_plate: bool) -> T {
    let p = scheme_polynomial::<T>(with_wave_plate);
    coincidence_amplitudes(&p, &["d1", "d2", "d3", "d4"])
        .iter()
        .fold(T::zero(), |acc, a| acc + a.norm_sqr())
}
