//! Acceptance criteria, one pass/fail line each. Exits non-zero if any fails.

use std::f64::consts::SQRT_2;
use std::path::PathBuf;
use std::process::Command;

use fockbell::bell::{
    bell_verdict, closed_form_correlation_superposition, correlation, correlation_tensor,
    critical_visibility, lhv_sum, AnalyzerOutcome, FourPartyRegister, OutcomeModel, PhaseSettings,
    WhiteNoiseMixture,
};
use fockbell::optics::{beam_splitter, half_wave_plate, polarizing_beam_splitter, BsSign};
use fockbell::oracle;
use fockbell::postselect::{scheme_ghz, scheme_superposition, QubitRegister, Scheme};
use fockbell::{FockState, Mode, OccupationVector, Pol};
use fockbell_cli::{run_report, Report, RunArgs, SchemeArg};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn parties() -> Vec<String> {
    ["d1", "d2", "d3", "d4"].map(String::from).to_vec()
}

fn register_error(reg: &QubitRegister<f64>, expected: &[(&str, f64)]) -> f64 {
    (0..16)
        .map(|i| {
            let bits = reg.bitstring(i);
            let e = expected
                .iter()
                .find(|(b, _)| *b == bits)
                .map_or(0.0, |(_, v)| *v);
            (reg.amplitudes()[i] - Complex::new(e, 0.0)).norm()
        })
        .fold(0.0, f64::max)
}

fn ghz_register() -> Outcome {
    let reg = scheme_ghz::<f64>().register.canonical_phase();
    let h = 1.0 / SQRT_2;
    let err = register_error(&reg, &[("HVVH", h), ("VHHV", h)]);
    check(err < 1e-12, format!("max amplitude error {err:.2e}"))
}

fn superposition_register() -> Outcome {
    let reg = scheme_superposition::<f64>().register;
    let s = 1.0 / 10f64.sqrt();
    let expected = [
        ("HVVH", s),
        ("VHHV", s),
        ("HHHH", -2.0 * s),
        ("VVVV", -2.0 * s),
    ];
    let err = register_error(&reg, &expected);
    let target = QubitRegister::from_bitstrings(
        parties(),
        expected.iter().map(|(b, v)| (*b, Complex::new(*v, 0.0))),
    )
    .unwrap();
    let phase_err = reg
        .canonical_phase()
        .distance_up_to_phase(&target.canonical_phase());
    check(
        err < 1e-12 && phase_err < 1e-12,
        format!("max amplitude error {err:.2e}, up-to-phase distance {phase_err:.2e}"),
    )
}

fn success_probabilities() -> Outcome {
    let p1 = scheme_ghz::<f64>().success_probability;
    let p2 = scheme_superposition::<f64>().success_probability;
    let o1 = oracle::scheme_success_probability::<f64>(false);
    let o2 = oracle::scheme_success_probability::<f64>(true);
    let mut amp_err: f64 = 0.0;
    for (scheme, hwp) in [(Scheme::Ghz, false), (Scheme::Superposition, true)] {
        let r = scheme.run::<f64>();
        let amps = oracle::coincidence_amplitudes(
            &oracle::scheme_polynomial::<f64>(hwp),
            &["d1", "d2", "d3", "d4"],
        );
        for (a, o) in r.register.amplitudes().iter().zip(&amps) {
            amp_err = amp_err.max((a * r.success_probability.sqrt() - o).norm());
        }
    }
    let ok = (p1 - 1.0 / 24.0).abs() < 1e-12
        && (p2 - 5.0 / 24.0).abs() < 1e-12
        && (o1 - p1).abs() < 1e-12
        && (o2 - p2).abs() < 1e-12
        && amp_err < 1e-12;
    check(
        ok,
        format!(
            "p1 = {p1:.12}, p2 = {p2:.12}, oracle {o1:.12}/{o2:.12}, amplitude gap {amp_err:.2e}"
        ),
    )
}

fn random_phases(rng: &mut ChaCha8Rng) -> [f64; 4] {
    std::array::from_fn(|_| rng.gen_range(0.0..std::f64::consts::TAU))
}

fn closed_form_correlation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sup = FourPartyRegister::new(scheme_superposition().register).unwrap();
    let ghz = FourPartyRegister::new(scheme_ghz().register).unwrap();
    let mut worst_sup: f64 = 0.0;
    for _ in 0..1000 {
        let p = random_phases(&mut rng);
        worst_sup = worst_sup
            .max((correlation(&sup, &p) - closed_form_correlation_superposition(&p)).abs());
    }
    let mut worst_ghz: f64 = 0.0;
    for _ in 0..100 {
        let [a, b, c, d] = random_phases(&mut rng);
        worst_ghz = worst_ghz.max((correlation(&ghz, &[a, b, c, d]) - (a - b - c + d).cos()).abs());
    }
    check(
        worst_sup < 1e-10 && worst_ghz < 1e-10,
        format!("superposition {worst_sup:.2e} over 1000, GHZ {worst_ghz:.2e} over 100"),
    )
}

fn standard_tensor() -> fockbell::CorrelationTensor64 {
    let sup = FourPartyRegister::new(scheme_superposition().register).unwrap();
    correlation_tensor(&sup, &PhaseSettings::standard())
}

fn lhv_sum_value() -> Outcome {
    let t = standard_tensor();
    let sum = lhv_sum(&t);
    let (big, small) = (1.0 / (4.0 * SQRT_2), 3.0 / (20.0 * SQRT_2));
    let n_big = t
        .coefficients()
        .iter()
        .filter(|q| (q.abs() - big).abs() < 1e-12)
        .count();
    let n_small = t
        .coefficients()
        .iter()
        .filter(|q| (q.abs() - small).abs() < 1e-12)
        .count();
    let target = 16.0 / (5.0 * SQRT_2);
    check(
        (sum - target).abs() < 1e-12 && n_big == 8 && n_small == 8,
        format!("sum |q| = {sum:.12} (target {target:.12}), |q| counts {n_big} x 1/(4√2), {n_small} x 3/(20√2)"),
    )
}

fn verdict() -> Outcome {
    let v = bell_verdict(&standard_tensor());
    let target = 8.0 * SQRT_2 / 5.0 - 1.0;
    check(
        v.violated && (v.margin - target).abs() < 1e-12,
        format!("violated = {}, margin = {:.12}", v.violated, v.margin),
    )
}

fn visibility() -> Outcome {
    let v = critical_visibility(&standard_tensor()).unwrap();
    let target = 5.0 * SQRT_2 / 16.0;
    let state = FourPartyRegister::new(scheme_superposition().register).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = random_phases(&mut rng);
        let pure = correlation(&state, &p);
        for vis in [0.0, 0.5, 1.0] {
            let mixed = WhiteNoiseMixture {
                state: state.clone(),
                visibility: vis,
            };
            worst = worst.max((correlation(&mixed, &p) - vis * pure).abs());
        }
    }
    check(
        (v - target).abs() < 1e-12 && worst < 1e-12,
        format!("V_crit = {v:.12} (target {target:.12}), noise linearity error {worst:.2e}"),
    )
}

fn random_state(rng: &mut ChaCha8Rng, modes: &[Mode]) -> FockState<f64> {
    let terms: Vec<_> = (0..rng.gen_range(1..=6))
        .map(|_| {
            let occ = OccupationVector::from_counts(
                (0..4).map(|_| (modes[rng.gen_range(0..modes.len())].clone(), 1)),
            );
            (
                occ,
                Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    FockState::from_terms(4, terms)
        .unwrap()
        .normalize()
        .unwrap()
}

fn property_suites() -> Outcome {
    let elements = [
        beam_splitter::<f64>("a1", "a1.aux", "d1", "D1", BsSign::Plus).unwrap(),
        beam_splitter("a2", "a2.aux", "d4", "D2", BsSign::Minus).unwrap(),
        polarizing_beam_splitter("D1", "D2", "d3", "d2").unwrap(),
        half_wave_plate("a2"),
    ];
    let unitarity = elements
        .iter()
        .map(|e| e.unitarity_deviation())
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let inputs: Vec<Mode> = ["a1", "a2", "a1.aux", "a2.aux"]
        .iter()
        .flat_map(|l| Pol::BOTH.map(|p| Mode::new(*l, p)))
        .collect();
    let mut norm_err: f64 = 0.0;
    let mut number_ok = true;
    for scheme in [Scheme::Ghz, Scheme::Superposition] {
        let circuit = scheme.pipeline::<f64>().circuit;
        for _ in 0..100 {
            let s = random_state(&mut rng, &inputs);
            let out = circuit.apply(&s).unwrap();
            norm_err = norm_err.max((out.norm() - s.norm()).abs());
            number_ok &= out.photon_number() == s.photon_number();
        }
    }

    let mut completeness: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    for _ in 0..100 {
        let amps = (0..16)
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let reg = FourPartyRegister::new(QubitRegister::new(parties(), amps).unwrap()).unwrap();
        let p = random_phases(&mut rng);
        let total: f64 = AnalyzerOutcome::all()
            .map(|o| reg.outcome_probability(&o, &p))
            .sum();
        completeness = completeness.max((total - 1.0).abs());
        round_trip =
            round_trip.max(correlation_tensor(&reg, &PhaseSettings::standard()).round_trip_error());
    }

    let hhhh =
        QubitRegister::from_bitstrings(parties(), [("HHHH", Complex::new(1.0, 0.0))]).unwrap();
    let product_sum = lhv_sum(&correlation_tensor(
        &FourPartyRegister::new(hhhh).unwrap(),
        &PhaseSettings::standard(),
    ));

    let ok = unitarity < 1e-12
        && norm_err < 1e-10
        && number_ok
        && completeness < 1e-12
        && round_trip < 1e-12
        && product_sum <= 1.0;
    check(
        ok,
        format!(
            "unitarity {unitarity:.1e}, norm {norm_err:.1e}, photon number {number_ok}, \
             completeness {completeness:.1e}, round trip {round_trip:.1e}, |HHHH> sum {product_sum:.3}"
        ),
    )
}

fn cli_golden_files() -> Outcome {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let mut notes = Vec::new();
    let mut ok = true;
    for (file, golden, scheme) in [
        (
            "scheme1",
            include_str!("golden/scheme1.json"),
            SchemeArg::Ghz,
        ),
        (
            "scheme2",
            include_str!("golden/scheme2.json"),
            SchemeArg::Superposition,
        ),
    ] {
        let path = root.join("circuits").join(format!("{file}.circ"));
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_fockbell"))
                .args(["run", "--circuit"])
                .arg(&path)
                .arg("--bell-default")
                .output()
                .map(|o| (o.status.success(), o.stdout))
        };
        let (first, second) = match (run(), run()) {
            (Ok((true, a)), Ok((true, b))) => (a, b),
            _ => return Err(format!("{file}: binary run failed")),
        };
        let identical = first == second && first == golden.as_bytes();

        let builtin = run_report(&RunArgs {
            scheme: Some(scheme),
            bell_default: true,
            ..Default::default()
        })
        .map_err(|e| e.to_string())?;
        let from_file =
            Report::from_json(&String::from_utf8_lossy(&first)).map_err(|e| e.to_string())?;
        let matches = Report {
            scheme: builtin.scheme.clone(),
            ..from_file
        } == builtin;

        ok &= identical && matches;
        notes.push(format!(
            "{file}: byte-identical {identical}, matches pipeline {matches}"
        ));
    }
    check(ok, notes.join("; "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("scheme-1 register is the GHZ state", ghz_register),
        (
            "scheme-2 register is the two-GHZ superposition",
            superposition_register,
        ),
        (
            "success probabilities 1/24 and 5/24, oracle-confirmed",
            success_probabilities,
        ),
        ("correlation matches closed forms", closed_form_correlation),
        ("sum |q| = 16/(5√2) with 8+8 magnitudes", lhv_sum_value),
        ("Bell bound violated with margin 8√2/5 - 1", verdict),
        (
            "critical visibility 5√2/16 and linear noise scaling",
            visibility,
        ),
        ("property suites", property_suites),
        ("CLI golden reports", cli_golden_files),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
