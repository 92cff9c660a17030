//! Pauli-basis state tomography from simulated measurement counts, qutrit
//! extraction and Uhlmann fidelity.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{apply_channel, ChannelRep};
use crate::choi::{channel_from_choi, ChoiMatrix};
use crate::circuit::{
    apply_readout_flip, born_probabilities, evolve_density, rng_for, sample_distribution, Circuit, Gate, NoiseConfig,
};
use crate::error::{Error, Result};
use crate::numkit::{
    c64, eigvalsh, kron_all, project_to_density, roundoff_floor, sqrtm_psd, validate_density, ComplexMatrix, Tolerance,
    ONE, ZERO,
};
use crate::qutrit::{basis_densities, project_qutrit};

/// Default shots per measurement setting.
pub const DEFAULT_SHOTS: u64 = 8192;
/// Default number of λ values in [`channel_fidelity_sweep`].
pub const DEFAULT_GRID: usize = 101;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    Z,
    X,
    Y,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::Z, Pauli::X, Pauli::Y];

    fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Pauli::X => ComplexMatrix::from_complex(&[&[ZERO, ONE], &[ONE, ZERO]]),
            Pauli::Y => ComplexMatrix::from_complex(&[&[ZERO, c64(0.0, -1.0)], &[c64(0.0, 1.0), ZERO]]),
            Pauli::Z => ComplexMatrix::from_complex(&[&[ONE, ZERO], &[ZERO, -ONE]]),
        }
    }

    /// Gates rotating this Pauli's eigenbasis onto the computational basis (+1 ↦ `|0⟩`).
    pub fn pre_rotation(self, q: usize) -> Vec<Gate> {
        match self {
            Pauli::Z => vec![],
            Pauli::X => vec![Gate::h(q)],
            Pauli::Y => vec![Gate::u1(-FRAC_PI_2, q), Gate::h(q)],
        }
    }
}

/// One measurement basis per measured qubit, written like `"ZX"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeasurementSetting(Vec<Pauli>);

impl MeasurementSetting {
    pub fn new(bases: Vec<Pauli>) -> Self {
        MeasurementSetting(bases)
    }

    pub fn bases(&self) -> &[Pauli] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `3ⁿ` settings, last qubit varying fastest in the order Z, X, Y.
    pub fn all(n: usize) -> Vec<MeasurementSetting> {
        (0..3usize.pow(n as u32))
            .map(|mut idx| {
                let mut b = vec![Pauli::Z; n];
                for slot in b.iter_mut().rev() {
                    *slot = Pauli::ALL[idx % 3];
                    idx /= 3;
                }
                MeasurementSetting(b)
            })
            .collect()
    }

    /// Pre-rotation gates with setting position `k` acting on `measured[k]`.
    pub fn pre_rotation(&self, n_qubits: usize, measured: &[usize]) -> Result<Circuit> {
        let mut c = Circuit::new(n_qubits)?;
        for (p, &q) in self.0.iter().zip(measured) {
            for g in p.pre_rotation(q) {
                c.push(g)?;
            }
        }
        Ok(c)
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.letter()))
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse(format!("unknown measurement basis {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(MeasurementSetting)
    }
}

impl Serialize for MeasurementSetting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MeasurementSetting {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome data for every setting of one tomography run.
///
/// `shots == 0` marks an exact record holding Born probabilities instead of counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RecordJson", into = "RecordJson")]
pub struct TomographyRecord {
    shots: u64,
    seed: u64,
    measured: Vec<usize>,
    settings: Vec<MeasurementSetting>,
    counts: Vec<BTreeMap<String, u64>>,
    frequencies: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    shots: u64,
    seed: u64,
    measured: Vec<usize>,
    settings: Vec<MeasurementSetting>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    counts: Vec<BTreeMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    probabilities: Vec<Vec<f64>>,
}

impl TryFrom<RecordJson> for TomographyRecord {
    type Error = Error;

    fn try_from(j: RecordJson) -> Result<Self> {
        if j.shots == 0 {
            TomographyRecord::exact(j.seed, j.measured, j.settings, j.probabilities)
        } else {
            TomographyRecord::from_counts(j.shots, j.seed, j.measured, j.settings, j.counts)
        }
    }
}

impl From<TomographyRecord> for RecordJson {
    fn from(r: TomographyRecord) -> Self {
        let probabilities = if r.shots == 0 { r.frequencies } else { Vec::new() };
        RecordJson {
            shots: r.shots,
            seed: r.seed,
            measured: r.measured,
            settings: r.settings,
            counts: r.counts,
            probabilities,
        }
    }
}

fn check_settings(measured: &[usize], settings: &[MeasurementSetting], data_len: usize) -> Result<()> {
    if settings.len() != data_len {
        return Err(Error::Arity {
            expected: settings.len(),
            got: data_len,
        });
    }
    if let Some(s) = settings.iter().find(|s| s.len() != measured.len()) {
        return Err(Error::Parse(format!(
            "setting {s} does not cover {} qubits",
            measured.len()
        )));
    }
    Ok(())
}

impl TomographyRecord {
    /// A sampled record; every histogram must sum to `shots`.
    pub fn from_counts(
        shots: u64,
        seed: u64,
        measured: Vec<usize>,
        settings: Vec<MeasurementSetting>,
        counts: Vec<BTreeMap<String, u64>>,
    ) -> Result<Self> {
        if shots == 0 {
            return Err(Error::Domain("sampled records need positive shots".into()));
        }
        check_settings(&measured, &settings, counts.len())?;
        let n = measured.len();
        let mut frequencies = Vec::with_capacity(counts.len());
        for (s, hist) in settings.iter().zip(&counts) {
            let total: u64 = hist.values().sum();
            if total != shots {
                return Err(Error::Parse(format!(
                    "setting {s}: counts sum to {total}, expected {shots}"
                )));
            }
            let mut f = vec![0.0; 1 << n];
            for (k, &v) in hist {
                if k.len() != n || !k.bytes().all(|b| b == b'0' || b == b'1') {
                    return Err(Error::Parse(format!("setting {s}: bad outcome {k:?}")));
                }
                f[usize::from_str_radix(k, 2).expect("checked bitstring")] += v as f64 / shots as f64;
            }
            frequencies.push(f);
        }
        Ok(TomographyRecord {
            shots,
            seed,
            measured,
            settings,
            counts,
            frequencies,
        })
    }

    /// An infinite-shot record from outcome probabilities.
    pub fn exact(
        seed: u64,
        measured: Vec<usize>,
        settings: Vec<MeasurementSetting>,
        probabilities: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_settings(&measured, &settings, probabilities.len())?;
        let width = 1usize << measured.len();
        for p in &probabilities {
            let total: f64 = p.iter().sum();
            if p.len() != width || p.iter().any(|x| !(x.is_finite() && *x >= -1e-12)) || (total - 1.0).abs() > 1e-9 {
                return Err(Error::Parse(
                    "probability vectors must be distributions over all outcomes".into(),
                ));
            }
        }
        Ok(TomographyRecord {
            shots: 0,
            seed,
            measured,
            settings,
            counts: Vec::new(),
            frequencies: probabilities,
        })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn settings(&self) -> &[MeasurementSetting] {
        &self.settings
    }

    /// Histograms per setting; empty for exact records.
    pub fn counts(&self) -> &[BTreeMap<String, u64>] {
        &self.counts
    }

    /// Relative frequencies per setting, indexed by outcome.
    pub fn frequencies(&self) -> &[Vec<f64>] {
        &self.frequencies
    }

    pub fn is_exact(&self) -> bool {
        self.shots == 0
    }
}

/// Runs `c` from `|0…0⟩` and measures `measured` in all `3ⁿ` Pauli settings.
///
/// Setting `i` draws from stream `i` of `seed`. `shots == 0` returns exact
/// probabilities (readout flips still applied in expectation).
pub fn collect(
    c: &Circuit,
    measured: &[usize],
    shots: u64,
    seed: u64,
    noise: Option<&NoiseConfig>,
) -> Result<TomographyRecord> {
    let dim = 1usize << c.n_qubits();
    let mut rho = ComplexMatrix::zeros(dim, dim);
    rho[(0, 0)] = ONE;
    collect_streams(c, &rho, measured, shots, seed, 0, noise)
}

pub(crate) fn collect_streams(
    c: &Circuit,
    input: &ComplexMatrix,
    measured: &[usize],
    shots: u64,
    seed: u64,
    stream_base: u64,
    noise: Option<&NoiseConfig>,
) -> Result<TomographyRecord> {
    let n = c.n_qubits();
    if measured.is_empty()
        || measured
            .iter()
            .enumerate()
            .any(|(i, &q)| q >= n || measured[..i].contains(&q))
    {
        return Err(Error::Domain(format!(
            "measured qubits {measured:?} invalid for {n} qubits"
        )));
    }
    let state = evolve_density(c, input, noise);
    let settings = MeasurementSetting::all(measured.len());
    let flip = noise.map_or(0.0, |nz| nz.readout_flip);
    let k = measured.len();
    let per_setting: Vec<Vec<f64>> = settings
        .par_iter()
        .map(|s| {
            let rot = s.pre_rotation(n, measured)?;
            let rotated = evolve_density(&rot, &state, noise);
            born_probabilities(&rotated, n, measured)
        })
        .collect::<Result<_>>()?;
    if shots == 0 {
        let probs = per_setting.iter().map(|p| apply_readout_flip(p, k, flip)).collect();
        return TomographyRecord::exact(seed, measured.to_vec(), settings, probs);
    }
    let counts = per_setting
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut rng = rng_for(seed, stream_base + i as u64);
            sample_distribution(p, k, shots, flip, &mut rng)
        })
        .collect();
    TomographyRecord::from_counts(shots, seed, measured.to_vec(), settings, counts)
}

/// Linear-inversion estimate `(1/2ⁿ) Σ ⟨P⟩ P` over all Pauli strings, projected
/// onto the nearest density matrix. Expectations of strings with identity
/// factors average every compatible setting.
pub fn reconstruct(rec: &TomographyRecord) -> Result<ComplexMatrix> {
    let n = rec.measured.len();
    let index: BTreeMap<&MeasurementSetting, usize> = rec.settings.iter().enumerate().map(|(i, s)| (s, i)).collect();
    for s in MeasurementSetting::all(n) {
        if !index.contains_key(&s) {
            return Err(Error::MissingSetting(s.to_string()));
        }
    }
    let dim = 1usize << n;
    let identity = ComplexMatrix::identity(2);
    let mut rho = ComplexMatrix::zeros(dim, dim);
    // Each Pauli string as digits 0 = I, 1..=3 = Z, X, Y.
    for code in 0..4usize.pow(n as u32) {
        let digits: Vec<usize> = (0..n).rev().map(|k| (code / 4usize.pow(k as u32)) % 4).collect();
        let mut sum = 0.0;
        let mut used = 0usize;
        for s in MeasurementSetting::all(n) {
            let compatible = digits
                .iter()
                .zip(s.bases())
                .all(|(&d, &p)| d == 0 || Pauli::ALL[d - 1] == p);
            if !compatible {
                continue;
            }
            let freqs = &rec.frequencies[index[&s]];
            let mut e = 0.0;
            for (outcome, &f) in freqs.iter().enumerate() {
                let parity = digits
                    .iter()
                    .enumerate()
                    .filter(|(k, &d)| d != 0 && (outcome >> (n - 1 - k)) & 1 == 1)
                    .count();
                e += if parity % 2 == 0 { f } else { -f };
            }
            sum += e;
            used += 1;
        }
        let expectation = sum / used as f64;
        let factors: Vec<ComplexMatrix> = digits
            .iter()
            .map(|&d| {
                if d == 0 {
                    identity.clone()
                } else {
                    Pauli::ALL[d - 1].matrix()
                }
            })
            .collect();
        rho = &rho + &kron_all(&factors).scale_real(expectation / dim as f64);
    }
    project_to_density(&rho)
}

/// [`reconstruct`] for a two-qubit record.
pub fn reconstruct_2q(rec: &TomographyRecord) -> Result<ComplexMatrix> {
    if rec.measured.len() != 2 {
        return Err(Error::Dimension(format!(
            "expected a 2-qubit record, got {}",
            rec.measured.len()
        )));
    }
    reconstruct(rec)
}

/// Reconstructs the two-qubit state and post-selects it onto the qutrit: `(ρ₃, leakage)`.
pub fn reconstruct_qutrit(rec: &TomographyRecord) -> Result<(ComplexMatrix, f64)> {
    project_qutrit(&reconstruct_2q(rec)?)
}

/// Uhlmann fidelity `(Tr √(√a b √a))²`, clamped to `[0, 1]`.
pub fn fidelity(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!(
            "fidelity of {}x{} and {}x{} matrices",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    validate_density(a, Tolerance::DENSITY)?;
    validate_density(b, Tolerance::DENSITY)?;
    let sa = sqrtm_psd(a, Tolerance::DENSITY)?;
    let inner = (&(&sa * b) * &sa).hermitian_part();
    let ev = eigvalsh(&inner)?;
    let floor = roundoff_floor(&ev);
    let root_trace: f64 = ev.iter().filter(|&&l| l > floor).map(|l| l.sqrt()).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// Minimum, maximum and mean fidelity over a λ grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// Compares `Ω` against `reference` on `λρ_a + (1−λ)ρ_b` for `grid` evenly
/// spaced `λ ∈ [0, 1]`, with `ρ_1..ρ_9` the tomography inputs.
///
/// Outputs of `Ω` are projected onto density matrices before comparison.
pub fn channel_fidelity_sweep(
    omega: &ChoiMatrix,
    reference: &ChannelRep,
    a: usize,
    b: usize,
    grid: usize,
) -> Result<SweepStats> {
    let basis = basis_densities();
    if !(1..=9).contains(&a) || !(1..=9).contains(&b) {
        return Err(Error::Domain(format!("basis indices ({a}, {b}) outside 1..=9")));
    }
    if grid < 2 {
        return Err(Error::Domain(format!("grid needs at least 2 points, got {grid}")));
    }
    let (ra, rb) = (&basis[a - 1], &basis[b - 1]);
    let mut stats = SweepStats {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        mean: 0.0,
    };
    for i in 0..grid {
        let lambda = i as f64 / (grid - 1) as f64;
        let rho = &ra.scale_real(lambda) + &rb.scale_real(1.0 - lambda);
        let got = project_to_density(&channel_from_choi(omega, &rho)?)?;
        let want = apply_channel(reference, &rho)?;
        let f = fidelity(&want, &got)?;
        stats.min = stats.min.min(f);
        stats.max = stats.max.max(f);
        stats.mean += f / grid as f64;
    }
    Ok(stats)
}

/// One row of the pairwise sweep table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSweep {
    pub pair_a: usize,
    pub pair_b: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// [`channel_fidelity_sweep`] over all 36 pairs `a < b`.
pub fn sweep_all_pairs(omega: &ChoiMatrix, reference: &ChannelRep, grid: usize) -> Result<Vec<PairSweep>> {
    let pairs: Vec<(usize, usize)> = (1..=9).flat_map(|a| (a + 1..=9).map(move |b| (a, b))).collect();
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let s = channel_fidelity_sweep(omega, reference, a, b, grid)?;
            Ok(PairSweep {
                pair_a: a,
                pair_b: b,
                min: s.min,
                max: s.max,
                mean: s.mean,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::prep_basis_circuit;
    use crate::qutrit::{basis_kets, embed_state};

    fn bell() -> Circuit {
        Circuit::from_gates(2, [Gate::h(0), Gate::cnot(0, 1)]).unwrap()
    }

    #[test]
    fn setting_enumeration() {
        let s = MeasurementSetting::all(2);
        assert_eq!(s.len(), 9);
        assert_eq!(s[0].to_string(), "ZZ");
        assert_eq!(s[1].to_string(), "ZX");
        assert_eq!(MeasurementSetting::all(4).len(), 81);
        assert_eq!(
            "XY".parse::<MeasurementSetting>().unwrap().bases(),
            &[Pauli::X, Pauli::Y]
        );
        assert!("XQ".parse::<MeasurementSetting>().is_err());
    }

    #[test]
    fn pre_rotations_map_plus_eigenstates_to_zero() {
        for p in Pauli::ALL {
            let eig = crate::numkit::hermitian_eig(&p.matrix()).unwrap();
            let plus = eig.eigenvectors.select(&[0, 1], &[0]);
            let c = Circuit::from_gates(1, p.pre_rotation(0)).unwrap();
            let out = crate::circuit::simulate_state(&c, &plus).unwrap();
            assert!((out[(0, 0)].norm() - 1.0).abs() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn identity_circuit_zz() {
        let rec = collect(&Circuit::new(2).unwrap(), &[0, 1], 100, 3, None).unwrap();
        assert_eq!(rec.settings().len(), 9);
        assert_eq!(rec.counts()[0].get("00"), Some(&100));
    }

    #[test]
    fn bell_xx_parity() {
        let rec = collect(&bell(), &[0, 1], 100_000, 1, None).unwrap();
        let xx = rec.settings().iter().position(|s| s.to_string() == "XX").unwrap();
        let f = &rec.frequencies()[xx];
        assert!((f[0] + f[3] - 1.0).abs() < 0.01);
    }

    #[test]
    fn exact_records_invert_exactly() {
        let rec = collect(&bell(), &[0, 1], 0, 0, None).unwrap();
        let rho = reconstruct_2q(&rec).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = ComplexMatrix::column(vec![c64(r, 0.0), ZERO, ZERO, c64(r, 0.0)]);
        assert!(rho.approx_eq(&ComplexMatrix::projector(&psi), 1e-9));
        let zero = reconstruct_2q(&collect(&Circuit::new(2).unwrap(), &[0, 1], 0, 0, None).unwrap()).unwrap();
        assert!(zero.approx_eq(
            &ComplexMatrix::basis_ket(4, 0).matmul(&ComplexMatrix::basis_ket(4, 0).dagger()),
            1e-9
        ));
    }

    #[test]
    fn missing_setting_rejected() {
        let rec = collect(&bell(), &[0, 1], 10, 0, None).unwrap();
        let short = TomographyRecord::from_counts(
            10,
            0,
            vec![0, 1],
            rec.settings()[..8].to_vec(),
            rec.counts()[..8].to_vec(),
        )
        .unwrap();
        assert!(matches!(reconstruct_2q(&short), Err(Error::MissingSetting(_))));
    }

    #[test]
    fn negative_inversion_is_projected() {
        // Every setting reports "00": inconsistent with any state.
        let settings = MeasurementSetting::all(2);
        let counts = settings
            .iter()
            .map(|_| BTreeMap::from([("00".to_string(), 50)]))
            .collect();
        let rec = TomographyRecord::from_counts(50, 0, vec![0, 1], settings, counts).unwrap();
        let rho = reconstruct_2q(&rec).unwrap();
        validate_density(&rho, Tolerance::new(1e-10).unwrap()).unwrap();
    }

    #[test]
    fn qutrit_extraction() {
        let rec = collect(&prep_basis_circuit(3).unwrap(), &[0, 1], 0, 0, None).unwrap();
        let (rho, leak) = reconstruct_qutrit(&rec).unwrap();
        assert!(rho.approx_eq(&ComplexMatrix::diag_real(&[0.0, 0.0, 1.0]), 1e-9));
        assert!(leak < 1e-9);
        let noise = NoiseConfig::new(0.0, 0.0, 0.0, 0.05).unwrap();
        let rec = collect(&Circuit::new(2).unwrap(), &[0, 1], 0, 0, Some(&noise)).unwrap();
        let (_, leak) = reconstruct_qutrit(&rec).unwrap();
        assert!(leak > 0.0 && leak < 0.02);
    }

    #[test]
    fn fidelity_values() {
        let kets = basis_kets();
        let p0 = ComplexMatrix::projector(&kets[0]);
        let p1 = ComplexMatrix::projector(&kets[1]);
        let plus = ComplexMatrix::projector(&kets[3]);
        assert!((fidelity(&p0, &p0).unwrap() - 1.0).abs() < 1e-10);
        assert!(fidelity(&p0, &p1).unwrap() < 1e-10);
        assert!((fidelity(&p0, &plus).unwrap() - 0.5).abs() < 1e-10);
        assert!(fidelity(&p0, &ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn record_json_roundtrip() {
        let rec = collect(&bell(), &[0, 1], 64, 5, None).unwrap();
        let text = serde_json::to_string(&rec).unwrap();
        assert!(text.contains("\"settings\":[\"ZZ\",\"ZX\""));
        assert_eq!(serde_json::from_str::<TomographyRecord>(&text).unwrap(), rec);
        let exact = collect(&bell(), &[0, 1], 0, 5, None).unwrap();
        let text = serde_json::to_string(&exact).unwrap();
        assert_eq!(serde_json::from_str::<TomographyRecord>(&text).unwrap(), exact);
    }

    #[test]
    fn collection_is_deterministic() {
        let c = prep_basis_circuit(9).unwrap();
        assert_eq!(
            collect(&c, &[0, 1], 500, 8, None).unwrap(),
            collect(&c, &[0, 1], 500, 8, None).unwrap()
        );
        assert_ne!(
            collect(&c, &[0, 1], 500, 8, None).unwrap(),
            collect(&c, &[0, 1], 500, 9, None).unwrap()
        );
        let kets = basis_kets();
        let want = ComplexMatrix::projector(&embed_state(&kets[8]).unwrap());
        let got = reconstruct_2q(&collect(&c, &[0, 1], 0, 0, None).unwrap()).unwrap();
        assert!(got.approx_eq(&want, 1e-9));
    }
}
