//! Passive linear optical elements acting on polarization modes.
//!
//! An element is a linear map on creation operators, `a† -> Σ u_k b_k†`. Applying it
//! to a [`FockState`] rewrites each occupation as a creation-operator monomial,
//! substitutes every operator by its image and re-expands the product.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{FockState, Mode, OccupationVector, Pol};
use crate::scalar::{real, Real};

/// Sign convention of a 50:50 beam splitter on its primary input:
/// `Plus` maps `in -> (t + r)/√2`, `Minus` maps `in -> (t - r)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsSign {
    Plus,
    Minus,
}

impl BsSign {
    fn value<T: Real>(self) -> T {
        match self {
            BsSign::Plus => T::one(),
            BsSign::Minus => -T::one(),
        }
    }
}

/// Label of the auxiliary vacuum port completing a beam splitter fed by `input`.
pub fn aux_port(input: &str) -> String {
    format!("{input}.aux")
}

pub type ModeImage<T> = Vec<(Mode, Complex<T>)>;

/// A unitary map from a set of input modes to an equally sized set of output modes.
/// Modes outside the input set pass through unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearElement<T: Real> {
    name: String,
    mode_map: BTreeMap<Mode, ModeImage<T>>,
}

impl<T: Real> LinearElement<T> {
    /// Validates that the port matrix is square and unitary.
    pub fn new(name: impl Into<String>, mode_map: BTreeMap<Mode, ModeImage<T>>) -> Result<Self> {
        let element = LinearElement {
            name: name.into(),
            mode_map,
        };
        let inputs = element.mode_map.len();
        let outputs = element.outputs().len();
        if inputs != outputs {
            return Err(Error::Mode(format!(
                "element `{}` maps {inputs} input modes onto {outputs} output modes",
                element.name
            )));
        }
        let deviation = element.unitarity_deviation();
        if deviation.is_nan() || deviation >= T::tolerance() {
            return Err(Error::NonUnitary {
                name: element.name,
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(element)
    }

    /// The identity element (no listed modes).
    pub fn identity() -> Self {
        LinearElement {
            name: "identity".into(),
            mode_map: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mode_map(&self) -> &BTreeMap<Mode, ModeImage<T>> {
        &self.mode_map
    }

    pub fn inputs(&self) -> Vec<Mode> {
        self.mode_map.keys().cloned().collect()
    }

    pub fn outputs(&self) -> Vec<Mode> {
        let set: BTreeSet<&Mode> = self
            .mode_map
            .values()
            .flat_map(|img| img.iter().map(|(m, _)| m))
            .collect();
        set.into_iter().cloned().collect()
    }

    /// Every spatial label this element reads or writes.
    pub fn spatial_labels(&self) -> BTreeSet<&str> {
        self.mode_map
            .iter()
            .flat_map(|(m, img)| std::iter::once(m).chain(img.iter().map(|(o, _)| o)))
            .map(|m| m.spatial.as_str())
            .collect()
    }

    /// Image of a creation operator; unlisted modes map to themselves.
    pub fn image(&self, mode: &Mode) -> ModeImage<T> {
        match self.mode_map.get(mode) {
            Some(img) => img.clone(),
            None => vec![(mode.clone(), Complex::one())],
        }
    }

    /// Port matrix with rows indexed by [`outputs`](Self::outputs) and columns by
    /// [`inputs`](Self::inputs), both in canonical mode order.
    pub fn port_matrix(&self) -> Vec<Vec<Complex<T>>> {
        let outputs = self.outputs();
        let mut u = vec![vec![Complex::zero(); self.mode_map.len()]; outputs.len()];
        for (col, img) in self.mode_map.values().enumerate() {
            for (mode, coeff) in img {
                let row = outputs.binary_search(mode).expect("output listed");
                u[row][col] += *coeff;
            }
        }
        u
    }

    /// `max |(U†U - I)_jk|` over the port matrix.
    pub fn unitarity_deviation(&self) -> T {
        gram_deviation(&self.port_matrix())
    }
}

/// Largest entry of `A†A - I` for a column-major view of `a` (rows x cols).
fn gram_deviation<T: Real>(a: &[Vec<Complex<T>>]) -> T {
    let cols = a.first().map_or(0, Vec::len);
    let mut worst = T::zero();
    for j in 0..cols {
        for k in 0..cols {
            let mut g: Complex<T> = a.iter().map(|row| row[j].conj() * row[k]).sum();
            if j == k {
                g -= Complex::one();
            }
            worst = worst.max(g.norm());
        }
    }
    worst
}

fn distinct(labels: &[&str]) -> Result<()> {
    for (i, a) in labels.iter().enumerate() {
        if a.is_empty() {
            return Err(Error::Mode("empty spatial label".into()));
        }
        if labels[..i].contains(a) {
            return Err(Error::Mode(format!("spatial label `{a}` used twice")));
        }
    }
    Ok(())
}

/// Polarization-independent 50:50 beam splitter.
///
/// For each polarization `p`: `in_p -> (t_p ± r_p)/√2` and the auxiliary port
/// `aux_p -> (t_p ∓ r_p)/√2`, which completes the map to a unitary.
pub fn beam_splitter<T: Real>(
    input: &str,
    aux: &str,
    out_t: &str,
    out_r: &str,
    sign: BsSign,
) -> Result<LinearElement<T>> {
    distinct(&[input, aux, out_t, out_r])?;
    let h = T::FRAC_1_SQRT_2();
    let s = sign.value::<T>();
    let mut map = BTreeMap::new();
    for p in Pol::BOTH {
        map.insert(
            Mode::new(input, p),
            vec![
                (Mode::new(out_t, p), real(h)),
                (Mode::new(out_r, p), real(s * h)),
            ],
        );
        map.insert(
            Mode::new(aux, p),
            vec![
                (Mode::new(out_t, p), real(h)),
                (Mode::new(out_r, p), real(-s * h)),
            ],
        );
    }
    LinearElement::new(format!("bs {input} -> {out_t} {out_r}"), map)
}

/// Polarizing beam splitter transmitting H and reflecting V.
///
/// `in1` sends H to `out_h1` and V to `out_v1`; `in2` is routed complementarily,
/// H to `out_v1` and V to `out_h1`.
pub fn polarizing_beam_splitter<T: Real>(
    in1: &str,
    in2: &str,
    out_h1: &str,
    out_v1: &str,
) -> Result<LinearElement<T>> {
    distinct(&[in1, in2])?;
    distinct(&[out_h1, out_v1])?;
    let one = Complex::one();
    let mut map = BTreeMap::new();
    map.insert(Mode::h(in1), vec![(Mode::h(out_h1), one)]);
    map.insert(Mode::v(in1), vec![(Mode::v(out_v1), one)]);
    map.insert(Mode::h(in2), vec![(Mode::h(out_v1), one)]);
    map.insert(Mode::v(in2), vec![(Mode::v(out_h1), one)]);
    LinearElement::new(format!("pbs {in1} {in2} -> {out_h1} {out_v1}"), map)
}

/// Half-wave plate swapping H and V on one spatial mode.
pub fn half_wave_plate<T: Real>(target: &str) -> LinearElement<T> {
    let mut map = BTreeMap::new();
    for p in Pol::BOTH {
        map.insert(
            Mode::new(target, p),
            vec![(Mode::new(target, p.flipped()), Complex::one())],
        );
    }
    LinearElement {
        name: format!("hwp {target}"),
        mode_map: map,
    }
}

/// Evolves `state` through `element`.
pub fn apply_element<T: Real>(state: &FockState<T>, element: &LinearElement<T>) -> FockState<T> {
    let mut out: BTreeMap<OccupationVector, Complex<T>> = BTreeMap::new();
    for (occ, &amp) in state.terms() {
        // Monomial coefficients: |n> = Π (a†)^n / √(n!) |0>.
        let norm = T::from_u64(occ.factorial_product()).unwrap().sqrt();
        let mut poly: BTreeMap<OccupationVector, Complex<T>> = BTreeMap::new();
        poly.insert(OccupationVector::new(), amp / norm);

        for (mode, n) in occ.iter() {
            let image = element.image(mode);
            for _ in 0..n {
                let mut next = BTreeMap::new();
                for (mono, c) in &poly {
                    for (target, u) in &image {
                        let mut m = mono.clone();
                        m.add(target, 1);
                        *next.entry(m).or_insert_with(Complex::zero) += *c * *u;
                    }
                }
                poly = next;
            }
        }

        for (mono, c) in poly {
            let ladder = T::from_u64(mono.factorial_product()).unwrap().sqrt();
            *out.entry(mono).or_insert_with(Complex::zero) += c * ladder;
        }
    }
    FockState::from_terms(state.photon_number(), out)
        .expect("linear optics conserves photon number")
}

/// Ordered sequence of elements over a declared set of spatial modes.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T: Real> {
    spatial_modes: Vec<String>,
    elements: Vec<LinearElement<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(spatial_modes: Vec<String>, elements: Vec<LinearElement<T>>) -> Result<Self> {
        let labels: Vec<&str> = spatial_modes.iter().map(String::as_str).collect();
        distinct(&labels)?;
        let circuit = Circuit {
            spatial_modes,
            elements,
        };
        for e in &circuit.elements {
            for label in e.spatial_labels() {
                if !circuit.declares(label) {
                    return Err(Error::Mode(format!(
                        "element `{}` references undeclared mode `{label}`",
                        e.name()
                    )));
                }
            }
        }
        let deviation = circuit.isometry_deviation();
        if deviation.is_nan() || deviation >= T::tolerance() {
            return Err(Error::NonUnitary {
                name: "circuit".into(),
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(circuit)
    }

    pub fn spatial_modes(&self) -> &[String] {
        &self.spatial_modes
    }

    pub fn elements(&self) -> &[LinearElement<T>] {
        &self.elements
    }

    pub fn declares(&self, label: &str) -> bool {
        self.spatial_modes.iter().any(|m| m == label)
    }

    /// Modes consumed by some element before any earlier element writes to them.
    pub fn primary_inputs(&self) -> Vec<Mode> {
        let mut produced = BTreeSet::new();
        let mut primary = BTreeSet::new();
        for e in &self.elements {
            for m in e.inputs() {
                if !produced.contains(&m) {
                    primary.insert(m);
                }
            }
            produced.extend(e.outputs());
        }
        primary.into_iter().collect()
    }

    /// Image of a single creation operator through the whole circuit.
    pub fn transfer(&self, input: &Mode) -> BTreeMap<Mode, Complex<T>> {
        let mut current = BTreeMap::new();
        current.insert(input.clone(), Complex::one());
        for e in &self.elements {
            let mut next: BTreeMap<Mode, Complex<T>> = BTreeMap::new();
            for (mode, c) in &current {
                for (target, u) in e.image(mode) {
                    *next.entry(target).or_insert_with(Complex::zero) += *c * u;
                }
            }
            current = next;
        }
        current
    }

    /// `max |(U†U - I)_jk|` of the composed map restricted to the primary inputs.
    pub fn isometry_deviation(&self) -> T {
        let inputs = self.primary_inputs();
        let images: Vec<_> = inputs.iter().map(|m| self.transfer(m)).collect();
        let rows: BTreeSet<&Mode> = images.iter().flat_map(|img| img.keys()).collect();
        let matrix: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|row| {
                images
                    .iter()
                    .map(|img| img.get(*row).copied().unwrap_or_else(Complex::zero))
                    .collect()
            })
            .collect();
        gram_deviation(&matrix)
    }

    /// Left-to-right fold of [`apply_element`].
    pub fn apply(&self, state: &FockState<T>) -> Result<FockState<T>> {
        if let Some(m) = state
            .occupied_modes()
            .into_iter()
            .find(|m| !self.declares(&m.spatial))
        {
            return Err(Error::Mode(format!("state occupies undeclared mode `{m}`")));
        }
        Ok(self
            .elements
            .iter()
            .fold(state.clone(), |s, e| apply_element(&s, e)))
    }
}

/// Evolves `state` through every element of `circuit` in order.
pub fn apply_circuit<T: Real>(state: &FockState<T>, circuit: &Circuit<T>) -> Result<FockState<T>> {
    circuit.apply(state)
}
