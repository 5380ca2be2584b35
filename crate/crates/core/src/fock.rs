//! Sparse bosonic number states over polarization-labelled modes.
//!
//! A [`FockState`] is a map from [`OccupationVector`] to complex amplitude. Every
//! state is number-definite: all stored occupations carry the same total photon
//! count, and operations that would mix photon numbers return an error instead.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Polarization of a mode. `H` orders before `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pol {
    H,
    V,
}

impl Pol {
    pub const BOTH: [Pol; 2] = [Pol::H, Pol::V];

    pub fn flipped(self) -> Pol {
        match self {
            Pol::H => Pol::V,
            Pol::V => Pol::H,
        }
    }
}

impl fmt::Display for Pol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pol::H => "H",
            Pol::V => "V",
        })
    }
}

/// A (spatial, polarization) channel.
///
/// Ordering is lexicographic on the spatial label, then `H` before `V`. This order
/// fixes term order in every serialized state and every tensor index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub spatial: String,
    pub pol: Pol,
}

impl Mode {
    pub fn new(spatial: impl Into<String>, pol: Pol) -> Self {
        Mode {
            spatial: spatial.into(),
            pol,
        }
    }

    pub fn h(spatial: impl Into<String>) -> Self {
        Mode::new(spatial, Pol::H)
    }

    pub fn v(spatial: impl Into<String>) -> Self {
        Mode::new(spatial, Pol::V)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.spatial, self.pol)
    }
}

/// Photon counts per mode. Absent modes hold zero photons; zeros are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector {
    counts: BTreeMap<Mode, u32>,
}

impl OccupationVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an occupation from `(mode, count)` pairs; repeated modes accumulate.
    pub fn from_counts<I: IntoIterator<Item = (Mode, u32)>>(pairs: I) -> Self {
        let mut occ = Self::new();
        for (mode, n) in pairs {
            occ.add(&mode, n);
        }
        occ
    }

    /// One photon in each listed mode (repeats accumulate).
    pub fn from_modes<'a, I: IntoIterator<Item = &'a Mode>>(modes: I) -> Self {
        Self::from_counts(modes.into_iter().map(|m| (m.clone(), 1)))
    }

    pub fn count(&self, mode: &Mode) -> u32 {
        self.counts.get(mode).copied().unwrap_or(0)
    }

    /// Photons in a spatial mode summed over both polarizations.
    pub fn spatial_count(&self, spatial: &str) -> u32 {
        Pol::BOTH
            .iter()
            .map(|&p| self.count(&Mode::new(spatial, p)))
            .sum()
    }

    pub fn total(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mode, u32)> {
        self.counts.iter().map(|(m, &n)| (m, n))
    }

    pub fn modes(&self) -> impl Iterator<Item = &Mode> {
        self.counts.keys()
    }

    pub(crate) fn add(&mut self, mode: &Mode, n: u32) {
        if n == 0 {
            return;
        }
        *self.counts.entry(mode.clone()).or_insert(0) += n;
    }

    /// Product of `n!` over all modes.
    pub fn factorial_product(&self) -> u64 {
        self.counts
            .values()
            .map(|&n| (1..=u64::from(n)).product::<u64>())
            .product()
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, (mode, n)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}_{mode}")?;
        }
        f.write_str(">")
    }
}

/// Number-definite superposition of occupation vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState<T: Real> {
    terms: BTreeMap<OccupationVector, Complex<T>>,
    photon_number: u32,
}

impl<T: Real> FockState<T> {
    /// The vacuum `|0>` with unit amplitude.
    pub fn vacuum() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(OccupationVector::new(), Complex::one());
        FockState {
            terms,
            photon_number: 0,
        }
    }

    /// The zero vector in the `photon_number` sector.
    pub fn zero(photon_number: u32) -> Self {
        FockState {
            terms: BTreeMap::new(),
            photon_number,
        }
    }

    /// Collects terms into a state of the given photon number. Repeated
    /// occupations are summed, small amplitudes pruned.
    pub fn from_terms<I>(photon_number: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationVector, Complex<T>)>,
    {
        let mut map: BTreeMap<OccupationVector, Complex<T>> = BTreeMap::new();
        for (occ, amp) in terms {
            let total = occ.total();
            if total != photon_number {
                return Err(Error::PhotonNumberMismatch {
                    left: photon_number,
                    right: total,
                });
            }
            *map.entry(occ).or_insert_with(Complex::zero) += amp;
        }
        Ok(FockState {
            terms: map,
            photon_number,
        }
        .pruned())
    }

    /// Second-order emission of a polarization-entangled pair source:
    /// `(a1H† a2V† - a1V† a2H†)² |0> / (2√3)`.
    pub fn pdc_second_order(a1: &str, a2: &str) -> Result<Self> {
        if a1.is_empty() || a2.is_empty() {
            return Err(Error::Mode("empty spatial label".into()));
        }
        if a1 == a2 {
            return Err(Error::Mode(format!(
                "source ports must differ, got `{a1}` twice"
            )));
        }
        let one = Self::vacuum();
        let hv = one
            .apply_creation(&Mode::h(a1))
            .apply_creation(&Mode::v(a2));
        let vh = one
            .apply_creation(&Mode::v(a1))
            .apply_creation(&Mode::h(a2));
        let pair = hv.add(&vh.scale(-Complex::one()))?;

        // Square the pair operator by applying it once more to its own output.
        let hv2 = pair
            .apply_creation(&Mode::h(a1))
            .apply_creation(&Mode::v(a2));
        let vh2 = pair
            .apply_creation(&Mode::v(a1))
            .apply_creation(&Mode::h(a2));
        let squared = hv2.add(&vh2.scale(-Complex::one()))?;

        let prefactor = T::one() / (T::lit(2.0) * T::lit(3.0).sqrt());
        Ok(squared.scale(real(prefactor)))
    }

    pub fn photon_number(&self) -> u32 {
        self.photon_number
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical occupation order.
    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> Complex<T> {
        self.terms.get(occ).copied().unwrap_or_else(Complex::zero)
    }

    /// Every mode carrying at least one photon in some term.
    pub fn occupied_modes(&self) -> std::collections::BTreeSet<&Mode> {
        self.terms.keys().flat_map(|occ| occ.modes()).collect()
    }

    /// Applies a creation operator: `|n> -> √(n+1) |n+1>` on `mode`.
    pub fn apply_creation(&self, mode: &Mode) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(occ, &amp)| {
                let n = occ.count(mode);
                let mut raised = occ.clone();
                raised.add(mode, 1);
                let factor = T::from_u32(n + 1).unwrap().sqrt();
                (raised, amp * factor)
            })
            .collect();
        FockState {
            terms,
            photon_number: self.photon_number + 1,
        }
    }

    /// `<self|other>`; zero when the photon numbers differ.
    pub fn inner_product(&self, other: &Self) -> Complex<T> {
        if self.photon_number != other.photon_number {
            return Complex::zero();
        }
        let (small, large, swap) = if self.terms.len() <= other.terms.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex::zero();
        for (occ, a) in &small.terms {
            if let Some(b) = large.terms.get(occ) {
                acc += if swap { b.conj() * a } else { a.conj() * b };
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> T {
        self.terms
            .values()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm <= T::tolerance() {
            return Err(Error::ZeroState);
        }
        Ok(self.scale(real(norm.recip())))
    }

    /// Rotates the global phase so the first term in canonical order has a real,
    /// positive amplitude.
    pub fn canonical_phase(&self) -> Result<Self> {
        let first = self
            .terms
            .values()
            .find(|a| a.norm() > T::tolerance())
            .ok_or(Error::ZeroState)?;
        let phase = first.conj() / first.norm();
        let mut out = self.scale(phase);
        // Pin the reference amplitude to exactly real.
        if let Some(a) = out.terms.values_mut().next() {
            a.im = T::zero();
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        FockState {
            terms: self
                .terms
                .iter()
                .map(|(o, &a)| (o.clone(), a * factor))
                .collect(),
            photon_number: self.photon_number,
        }
        .pruned()
    }

    /// Sum of two states in the same photon-number sector.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.photon_number != other.photon_number {
            return Err(Error::PhotonNumberMismatch {
                left: self.photon_number,
                right: other.photon_number,
            });
        }
        let mut terms = self.terms.clone();
        for (occ, &amp) in &other.terms {
            *terms.entry(occ.clone()).or_insert_with(Complex::zero) += amp;
        }
        Ok(FockState {
            terms,
            photon_number: self.photon_number,
        }
        .pruned())
    }

    /// Keeps only terms satisfying `keep`.
    pub fn filter<F: FnMut(&OccupationVector) -> bool>(&self, mut keep: F) -> Self {
        FockState {
            terms: self
                .terms
                .iter()
                .filter(|(o, _)| keep(o))
                .map(|(o, &a)| (o.clone(), a))
                .collect(),
            photon_number: self.photon_number,
        }
    }

    /// Largest amplitude difference against `other`, over the union of terms.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for occ in self.terms.keys().chain(other.terms.keys()) {
            worst = worst.max((self.amplitude(occ) - other.amplitude(occ)).norm());
        }
        if self.photon_number != other.photon_number && !(self.is_empty() && other.is_empty()) {
            worst = worst.max(self.norm().max(other.norm()));
        }
        worst
    }

    pub(crate) fn pruned(mut self) -> Self {
        let tol = T::tolerance();
        self.terms.retain(|_, a| a.norm() >= tol);
        self
    }
}

impl<T: Real> fmt::Display for FockState<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (occ, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({} {:+}i){}", a.re, a.im, occ)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(pairs: &[(&str, Pol, u32)]) -> OccupationVector {
        OccupationVector::from_counts(pairs.iter().map(|&(s, p, n)| (Mode::new(s, p), n)))
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn vacuum_is_single_unit_term() {
        let vac = FockState::<f64>::vacuum();
        assert_eq!(vac.photon_number(), 0);
        assert_eq!(vac.len(), 1);
        assert_eq!(vac.amplitude(&OccupationVector::new()), c(1.0, 0.0));
        assert_eq!(vac.norm(), 1.0);
        assert_eq!(vac.apply_creation(&Mode::h("a1")).photon_number(), 1);
    }

    #[test]
    fn creation_ladder_factors() {
        let a = Mode::h("a1");
        let one = FockState::<f64>::vacuum().apply_creation(&a);
        assert_eq!(one.amplitude(&ket(&[("a1", Pol::H, 1)])), c(1.0, 0.0));
        let two = one.apply_creation(&a);
        assert!((two.amplitude(&ket(&[("a1", Pol::H, 2)])).re - 2f64.sqrt()).abs() < 1e-15);

        // √1·√2 on each of two modes.
        let b = Mode::v("a2");
        let s = two.apply_creation(&b).apply_creation(&b);
        let amp = s.amplitude(&ket(&[("a1", Pol::H, 2), ("a2", Pol::V, 2)]));
        assert!((amp.re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn inner_product_cases() {
        let vac = FockState::<f64>::vacuum();
        assert_eq!(vac.inner_product(&vac), c(1.0, 0.0));
        let h = vac.apply_creation(&Mode::h("a1"));
        let v = vac.apply_creation(&Mode::v("a1"));
        assert_eq!(h.inner_product(&v), c(0.0, 0.0));
        assert_eq!(h.inner_product(&vac), c(0.0, 0.0));
        let pdc = FockState::<f64>::pdc_second_order("a1", "a2").unwrap();
        assert!((pdc.inner_product(&pdc) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn normalize_and_zero_state() {
        let s = FockState::from_terms(1, [(ket(&[("a1", Pol::H, 1)]), c(2.0, 0.0))]).unwrap();
        let n = s.normalize().unwrap();
        assert_eq!(n.amplitude(&ket(&[("a1", Pol::H, 1)])), c(1.0, 0.0));
        assert_eq!(FockState::<f64>::zero(2).normalize(), Err(Error::ZeroState));
        assert_eq!(
            FockState::<f64>::zero(2).canonical_phase(),
            Err(Error::ZeroState)
        );
    }

    #[test]
    fn unnormalized_source_norm() {
        // Amplitudes {2, -2, 2} before the 1/(2√3) prefactor.
        let pdc = FockState::<f64>::pdc_second_order("a1", "a2").unwrap();
        let raw = pdc.scale(c(2.0 * 3f64.sqrt(), 0.0));
        assert!((raw.norm() - 2.0 * 3f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn canonical_phase_examples() {
        let k1 = ket(&[("a", Pol::H, 1)]);
        let k2 = ket(&[("b", Pol::H, 1)]);
        let s = FockState::from_terms(1, [(k1.clone(), c(0.0, 1.0))]).unwrap();
        assert_eq!(s.canonical_phase().unwrap().amplitude(&k1), c(1.0, 0.0));

        let s = FockState::from_terms(1, [(k1.clone(), c(-0.6, 0.0)), (k2.clone(), c(0.8, 0.0))])
            .unwrap();
        let p = s.canonical_phase().unwrap();
        assert!((p.amplitude(&k1) - c(0.6, 0.0)).norm() < 1e-15);
        assert!((p.amplitude(&k2) - c(-0.8, 0.0)).norm() < 1e-15);
        assert_eq!(p.canonical_phase().unwrap(), p);
    }

    #[test]
    fn pdc_amplitudes() {
        let pdc = FockState::<f64>::pdc_second_order("a1", "a2").unwrap();
        assert_eq!(pdc.photon_number(), 4);
        assert_eq!(pdc.len(), 3);
        assert!((pdc.norm() - 1.0).abs() < 1e-14);
        let r3 = 1.0 / 3f64.sqrt();
        let hv = pdc.amplitude(&ket(&[("a1", Pol::H, 2), ("a2", Pol::V, 2)]));
        let vh = pdc.amplitude(&ket(&[("a1", Pol::V, 2), ("a2", Pol::H, 2)]));
        let cross = pdc.amplitude(&ket(&[
            ("a1", Pol::H, 1),
            ("a1", Pol::V, 1),
            ("a2", Pol::H, 1),
            ("a2", Pol::V, 1),
        ]));
        assert!((hv - c(r3, 0.0)).norm() < 1e-15);
        assert!((vh - hv).norm() < 1e-15);
        assert!((cross - c(-r3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pdc_rejects_bad_labels() {
        assert!(matches!(
            FockState::<f64>::pdc_second_order("a1", "a1"),
            Err(Error::Mode(_))
        ));
        assert!(matches!(
            FockState::<f64>::pdc_second_order("", "a1"),
            Err(Error::Mode(_))
        ));
    }

    #[test]
    fn mixed_photon_numbers_rejected() {
        let vac = FockState::<f64>::vacuum();
        let one = vac.apply_creation(&Mode::h("x"));
        assert_eq!(
            vac.add(&one),
            Err(Error::PhotonNumberMismatch { left: 0, right: 1 })
        );
        assert!(FockState::from_terms(2, [(ket(&[("x", Pol::H, 1)]), c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn mode_ordering_is_label_then_polarization() {
        let mut modes = [Mode::v("d1"), Mode::h("d2"), Mode::h("d1"), Mode::v("a2")];
        modes.sort();
        let names: Vec<String> = modes.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["a2V", "d1H", "d1V", "d2H"]);
    }

    #[test]
    fn generic_over_f32() {
        let pdc = FockState::<f32>::pdc_second_order("a1", "a2").unwrap();
        assert!((pdc.norm() - 1.0).abs() < 1e-6);
    }
}
