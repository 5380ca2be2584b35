#![allow(dead_code)]

use fockbell::postselect::QubitRegister;
use fockbell::{FockState, Mode, OccupationVector, Pol};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn modes_of(labels: &[&str]) -> Vec<Mode> {
    labels
        .iter()
        .flat_map(|l| Pol::BOTH.map(|p| Mode::new(*l, p)))
        .collect()
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex<f64> {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Normalized random state with `photons` photons spread over `modes`.
pub fn random_state<R: Rng>(
    rng: &mut R,
    modes: &[Mode],
    photons: u32,
    max_terms: usize,
) -> FockState<f64> {
    let terms = rng.gen_range(1..=max_terms);
    let entries: Vec<(OccupationVector, Complex<f64>)> = (0..terms)
        .map(|_| {
            let occ = OccupationVector::from_counts(
                (0..photons).map(|_| (modes[rng.gen_range(0..modes.len())].clone(), 1)),
            );
            (occ, random_complex(rng))
        })
        .collect();
    FockState::from_terms(photons, entries)
        .unwrap()
        .normalize()
        .unwrap()
}

pub fn random_register<R: Rng>(rng: &mut R) -> QubitRegister<f64> {
    let parties = ["d1", "d2", "d3", "d4"].map(String::from).to_vec();
    let amps = (0..16).map(|_| random_complex(rng)).collect();
    QubitRegister::new(parties, amps).unwrap()
}

pub fn random_phases<R: Rng>(rng: &mut R) -> [f64; 4] {
    std::array::from_fn(|_| rng.gen_range(0.0..std::f64::consts::TAU))
}
