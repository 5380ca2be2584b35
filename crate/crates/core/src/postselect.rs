//! Fourfold-coincidence post-selection and the two source-to-register pipelines.
//!
//! Qubit encoding: H is bit 0, V is bit 1; the first listed party is the most
//! significant bit, so index order equals the lexicographic order of bitstrings
//! such as `"HVVH"`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{FockState, Mode, OccupationVector, Pol};
use crate::optics::{
    aux_port, beam_splitter, half_wave_plate, polarizing_beam_splitter, BsSign, Circuit,
};
use crate::scalar::{real, Real};

/// Spatial modes that must each receive exactly one photon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidencePattern {
    parties: Vec<String>,
}

impl CoincidencePattern {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(parties: I) -> Result<Self> {
        let parties: Vec<String> = parties.into_iter().map(Into::into).collect();
        if parties.is_empty() {
            return Err(Error::Mode(
                "coincidence pattern needs at least one mode".into(),
            ));
        }
        for (i, p) in parties.iter().enumerate() {
            if p.is_empty() || parties[..i].contains(p) {
                return Err(Error::Mode(format!("invalid or repeated party `{p}`")));
            }
        }
        Ok(CoincidencePattern { parties })
    }

    pub fn parties(&self) -> &[String] {
        &self.parties
    }

    /// True when every party holds exactly one photon and nothing else is occupied.
    pub fn accepts(&self, occ: &OccupationVector) -> bool {
        occ.total() as usize == self.parties.len()
            && self.parties.iter().all(|p| occ.spatial_count(p) == 1)
    }

    /// Occupation vector of the polarization assignment encoded by `index`.
    pub fn occupation(&self, index: usize) -> OccupationVector {
        let n = self.parties.len();
        OccupationVector::from_counts(self.parties.iter().enumerate().map(|(i, p)| {
            let pol = if (index >> (n - 1 - i)) & 1 == 0 {
                Pol::H
            } else {
                Pol::V
            };
            (Mode::new(p.as_str(), pol), 1)
        }))
    }
}

/// Normalized polarization qubits of an ordered list of parties.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitRegister<T: Real> {
    parties: Vec<String>,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> QubitRegister<T> {
    /// Builds a register from `2^n` amplitudes, normalizing them.
    pub fn new(parties: Vec<String>, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != 1usize << parties.len() {
            return Err(Error::PartyCount {
                expected: parties.len(),
                found: amplitudes.len().trailing_zeros() as usize,
            });
        }
        let norm = amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
            .sqrt();
        if norm <= T::tolerance() {
            return Err(Error::ZeroState);
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(QubitRegister {
            parties,
            amplitudes,
        })
    }

    /// Builds a register from `(bitstring, amplitude)` pairs, e.g. `("HVVH", 1.0)`.
    pub fn from_bitstrings<'a, I>(parties: Vec<String>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Complex<T>)>,
    {
        let mut amps = vec![Complex::zero(); 1usize << parties.len()];
        for (bits, amp) in terms {
            let index = parse_bitstring(bits, parties.len())?;
            amps[index] += amp;
        }
        Self::new(parties, amps)
    }

    pub fn parties(&self) -> &[String] {
        &self.parties
    }

    pub fn len(&self) -> usize {
        self.parties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parties.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, bits: &str) -> Result<Complex<T>> {
        Ok(self.amplitudes[parse_bitstring(bits, self.parties.len())?])
    }

    pub fn bitstring(&self, index: usize) -> String {
        bitstring(index, self.parties.len())
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Global phase chosen so the first nonzero amplitude (index order) is real and positive.
    pub fn canonical_phase(&self) -> Self {
        let tol = T::tolerance();
        let mut out = self.clone();
        if let Some(pos) = self.amplitudes.iter().position(|a| a.norm() > tol) {
            let a = self.amplitudes[pos];
            let phase = a.conj() / a.norm();
            for x in &mut out.amplitudes {
                *x *= phase;
            }
            out.amplitudes[pos].im = T::zero();
        }
        out
    }

    /// `1 - |<self|other>|`; zero iff the registers agree up to a global phase.
    pub fn distance_up_to_phase(&self, other: &Self) -> T {
        let overlap: Complex<T> = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        (T::one() - overlap.norm()).abs()
    }

    /// Simultaneous H<->V flip on every party.
    pub fn flip_all(&self) -> Self {
        let mask = self.amplitudes.len() - 1;
        let mut amplitudes = vec![Complex::zero(); self.amplitudes.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            amplitudes[i ^ mask] = *a;
        }
        QubitRegister {
            parties: self.parties.clone(),
            amplitudes,
        }
    }

    /// Re-embeds the register as a one-photon-per-party Fock state.
    pub fn to_fock(&self) -> FockState<T> {
        let pattern = CoincidencePattern {
            parties: self.parties.clone(),
        };
        FockState::from_terms(
            self.parties.len() as u32,
            self.amplitudes
                .iter()
                .enumerate()
                .map(|(i, &a)| (pattern.occupation(i), a)),
        )
        .expect("one photon per party")
    }
}

pub fn bitstring(index: usize, n: usize) -> String {
    (0..n)
        .map(|i| {
            if (index >> (n - 1 - i)) & 1 == 0 {
                'H'
            } else {
                'V'
            }
        })
        .collect()
}

fn parse_bitstring(bits: &str, n: usize) -> Result<usize> {
    if bits.chars().count() != n {
        return Err(Error::Mode(format!(
            "bitstring `{bits}` does not cover {n} parties"
        )));
    }
    bits.chars().try_fold(0usize, |acc, c| match c {
        'H' => Ok(acc << 1),
        'V' => Ok((acc << 1) | 1),
        _ => Err(Error::Mode(format!("bitstring `{bits}` must use H and V"))),
    })
}

/// Outcome of a post-selected pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeResult<T: Real> {
    pub register: QubitRegister<T>,
    /// Probability of the coincidence event, per emitted source state.
    pub success_probability: T,
    /// Evolved state before projection.
    pub raw_state: FockState<T>,
}

/// Keeps the coincidence component of `state` and re-indexes it as qubits.
pub fn project_coincidence<T: Real>(
    state: &FockState<T>,
    pattern: &CoincidencePattern,
) -> Result<SchemeResult<T>> {
    let n = pattern.parties.len();
    let mut amps = vec![Complex::zero(); 1usize << n];
    let mut probability = T::zero();
    if state.photon_number() as usize == n {
        for (index, amp) in amps.iter_mut().enumerate() {
            *amp = state.amplitude(&pattern.occupation(index));
            probability += amp.norm_sqr();
        }
    }
    if probability < T::tolerance() {
        return Err(Error::EmptyPostselection {
            probability: probability.to_f64().unwrap_or(0.0),
        });
    }
    let amps = amps
        .into_iter()
        .map(|a| a / real(probability.sqrt()))
        .collect();
    Ok(SchemeResult {
        register: QubitRegister {
            parties: pattern.parties.clone(),
            amplitudes: amps,
        },
        success_probability: probability,
        raw_state: state.clone(),
    })
}

/// Source, circuit and detection pattern of one generation scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Pipeline<T: Real> {
    pub source: FockState<T>,
    pub circuit: Circuit<T>,
    pub pattern: CoincidencePattern,
}

impl<T: Real> Pipeline<T> {
    pub fn run(&self) -> Result<SchemeResult<T>> {
        let evolved = self.circuit.apply(&self.source)?;
        project_coincidence(&evolved, &self.pattern)
    }
}

/// The two generation schemes built from a second-order pair source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Two beam splitters and a PBS; yields a four-party GHZ state.
    Ghz,
    /// As `Ghz` with a half-wave plate on the second source arm; yields a
    /// superposition of two orthogonal GHZ states.
    Superposition,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ghz => "ghz",
            Scheme::Superposition => "superposition",
        }
    }

    pub fn pipeline<T: Real>(self) -> Pipeline<T> {
        let mut modes: Vec<String> = ["a1", "a2", "D1", "D2", "d1", "d2", "d3", "d4"]
            .map(String::from)
            .to_vec();
        modes.push(aux_port("a1"));
        modes.push(aux_port("a2"));

        let mut elements = Vec::new();
        if self == Scheme::Superposition {
            elements.push(half_wave_plate("a2"));
        }
        elements.push(beam_splitter("a1", &aux_port("a1"), "d1", "D1", BsSign::Plus).unwrap());
        elements.push(beam_splitter("a2", &aux_port("a2"), "d4", "D2", BsSign::Minus).unwrap());
        elements.push(polarizing_beam_splitter("D1", "D2", "d3", "d2").unwrap());

        Pipeline {
            source: FockState::pdc_second_order("a1", "a2").unwrap(),
            circuit: Circuit::new(modes, elements).expect("scheme circuit is valid"),
            pattern: CoincidencePattern::new(["d1", "d2", "d3", "d4"]).unwrap(),
        }
    }

    pub fn run<T: Real>(self) -> SchemeResult<T> {
        self.pipeline()
            .run()
            .expect("scheme post-selection is nonempty")
    }
}

/// Scheme 1: the GHZ state `(|HVVH> + |VHHV>)/√2`.
pub fn scheme_ghz<T: Real>() -> SchemeResult<T> {
    Scheme::Ghz.run()
}

/// Scheme 2: `[(|HVVH> + |VHHV>) - 2(|HHHH> + |VVVV>)]/√10`.
pub fn scheme_superposition<T: Real>() -> SchemeResult<T> {
    Scheme::Superposition.run()
}
