use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::ComplexMatrix;

/// Measurement histogram keyed by bitstrings (first character = first measured qubit).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CountsJson")]
pub struct Counts {
    shots: u64,
    seed: u64,
    counts: BTreeMap<String, u64>,
}

#[derive(Deserialize)]
struct CountsJson {
    shots: u64,
    seed: u64,
    counts: BTreeMap<String, u64>,
}

impl TryFrom<CountsJson> for Counts {
    type Error = Error;

    fn try_from(j: CountsJson) -> Result<Self> {
        Counts::new(j.shots, j.seed, j.counts)
    }
}

impl Counts {
    pub fn new(shots: u64, seed: u64, counts: BTreeMap<String, u64>) -> Result<Self> {
        if shots == 0 {
            return Err(Error::Domain("shots must be positive".into()));
        }
        let total: u64 = counts.values().sum();
        if total != shots {
            return Err(Error::Parse(format!("counts sum to {total}, expected {shots}")));
        }
        let mut widths = counts.keys().map(|k| k.len());
        if let Some(w) = widths.next() {
            if widths.any(|x| x != w) {
                return Err(Error::Parse("bitstrings have mixed lengths".into()));
            }
        }
        if counts
            .keys()
            .any(|k| k.is_empty() || !k.bytes().all(|b| b == b'0' || b == b'1'))
        {
            return Err(Error::Parse("counts keys must be non-empty bitstrings".into()));
        }
        Ok(Counts { shots, seed, counts })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    /// Relative frequencies indexed by outcome, for `n_bits`-wide outcomes.
    pub fn frequencies(&self, n_bits: usize) -> Result<Vec<f64>> {
        let mut f = vec![0.0; 1 << n_bits];
        for (k, &v) in &self.counts {
            if k.len() != n_bits {
                return Err(Error::Shape(format!("outcome {k} is not {n_bits} bits wide")));
            }
            let idx = usize::from_str_radix(k, 2).map_err(|e| Error::Parse(e.to_string()))?;
            f[idx] = v as f64 / self.shots as f64;
        }
        Ok(f)
    }
}

/// The generator for `(seed, stream)`.
///
/// ChaCha8 with the stream id selecting an independent keystream, so results
/// do not depend on the order in which streams are consumed.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Computational-basis probabilities of `measured` qubits of an `n_qubits`
/// state vector or density matrix; `measured[0]` is the outcome MSB.
pub fn born_probabilities(state: &ComplexMatrix, n_qubits: usize, measured: &[usize]) -> Result<Vec<f64>> {
    let dim = 1usize << n_qubits;
    let diag: Vec<f64> = match state.shape() {
        (r, 1) if r == dim => state.data().iter().map(|a| a.norm_sqr()).collect(),
        (r, c) if r == dim && c == dim => (0..dim).map(|i| state[(i, i)].re.max(0.0)).collect(),
        (r, c) => return Err(Error::Shape(format!("expected a {dim}-dimensional state, got {r}x{c}"))),
    };
    if measured.iter().any(|&q| q >= n_qubits) {
        return Err(Error::Domain("measured qubit outside register".into()));
    }
    let k = measured.len();
    let mut probs = vec![0.0; 1 << k];
    for (i, p) in diag.iter().enumerate() {
        let mut out = 0usize;
        for &q in measured {
            out = (out << 1) | ((i >> (n_qubits - 1 - q)) & 1);
        }
        probs[out] += p;
    }
    let total: f64 = probs.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain("state has zero norm".into()));
    }
    Ok(probs.into_iter().map(|p| p / total).collect())
}

/// Outcome distribution after each of `n_bits` bits flips independently with probability `flip`.
pub fn apply_readout_flip(probs: &[f64], n_bits: usize, flip: f64) -> Vec<f64> {
    let mut p = probs.to_vec();
    if flip == 0.0 {
        return p;
    }
    for b in 0..n_bits {
        let m = 1usize << b;
        let prev = p.clone();
        for (i, v) in p.iter_mut().enumerate() {
            *v = (1.0 - flip) * prev[i] + flip * prev[i ^ m];
        }
    }
    p
}

/// Draws `shots` outcomes from `probs`, then flips each bit with probability `flip`.
///
/// Per-shot flips are independent of the draw, so the histogram is sampled
/// as a single multinomial over the flipped distribution (one binomial per
/// outcome).
pub fn sample_distribution(
    probs: &[f64],
    n_bits: usize,
    shots: u64,
    flip: f64,
    rng: &mut ChaCha8Rng,
) -> BTreeMap<String, u64> {
    let p = apply_readout_flip(probs, n_bits, flip);
    let mut remaining = shots;
    let mut mass: f64 = p.iter().sum();
    let mut out = BTreeMap::new();
    for (i, &pi) in p.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let k = if i + 1 == p.len() || pi >= mass {
            remaining
        } else if pi <= 0.0 {
            0
        } else {
            let q = (pi / mass).clamp(0.0, 1.0);
            Binomial::new(remaining, q).expect("probability in [0, 1]").sample(rng)
        };
        mass -= pi;
        if k > 0 {
            out.insert(format!("{i:0n_bits$b}"), k);
            remaining -= k;
        }
    }
    out
}

/// Samples every qubit of a state vector or density matrix in the computational basis.
pub fn sample_counts(state: &ComplexMatrix, shots: u64, seed: u64, readout_flip: f64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::Domain("shots must be positive".into()));
    }
    if !(0.0..=1.0).contains(&readout_flip) {
        return Err(Error::Domain(format!("readout flip {readout_flip} outside [0, 1]")));
    }
    let dim = state.rows();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::Shape(format!("state dimension {dim} is not a qubit register")));
    }
    let n = dim.trailing_zeros() as usize;
    let measured: Vec<usize> = (0..n).collect();
    let probs = born_probabilities(state, n, &measured)?;
    let mut rng = rng_for(seed, 0);
    Counts::new(
        shots,
        seed,
        sample_distribution(&probs, n, shots, readout_flip, &mut rng),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::c64;

    #[test]
    fn deterministic_ket() {
        let c = sample_counts(&ComplexMatrix::basis_ket(2, 0), 100, 1, 0.0).unwrap();
        assert_eq!(c.counts().len(), 1);
        assert_eq!(c.get("0"), 100);
    }

    #[test]
    fn balanced_superposition() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = ComplexMatrix::column(vec![c64(r, 0.0), c64(r, 0.0)]);
        let c = sample_counts(&plus, 1_000_000, 11, 0.0).unwrap();
        assert!((c.get("0") as f64 / 1e6 - 0.5).abs() < 0.005);
        assert_eq!(c, sample_counts(&plus, 1_000_000, 11, 0.0).unwrap());
        assert_ne!(c, sample_counts(&plus, 1_000_000, 12, 0.0).unwrap());
    }

    #[test]
    fn readout_flip_rate() {
        let c = sample_counts(&ComplexMatrix::basis_ket(2, 0), 1_000_000, 5, 0.1).unwrap();
        assert!((c.get("1") as f64 / 1e6 - 0.1).abs() < 0.005);
    }

    #[test]
    fn marginal_probabilities_follow_measured_order() {
        // |011⟩
        let s = ComplexMatrix::basis_ket(8, 0b011);
        assert_eq!(born_probabilities(&s, 3, &[2, 0]).unwrap(), vec![0.0, 0.0, 1.0, 0.0]);
        let rho = ComplexMatrix::projector(&s);
        assert_eq!(born_probabilities(&rho, 3, &[1]).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn flip_convolution() {
        let p = apply_readout_flip(&[1.0, 0.0, 0.0, 0.0], 2, 0.1);
        let expected = [0.81, 0.09, 0.09, 0.01];
        for (a, b) in p.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn counts_validation_and_json() {
        let mut m = BTreeMap::new();
        m.insert("01".to_string(), 3);
        assert!(Counts::new(4, 0, m.clone()).is_err());
        let c = Counts::new(3, 9, m).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"shots":3,"seed":9,"counts":{"01":3}}"#);
        assert_eq!(serde_json::from_str::<Counts>(&text).unwrap(), c);
        assert!(serde_json::from_str::<Counts>(r#"{"shots":1,"seed":0,"counts":{"0a":1}}"#).is_err());
    }

    #[test]
    fn streams_are_independent_of_order() {
        use rand::RngCore;
        let a = rng_for(3, 7).next_u64();
        let mut other = rng_for(3, 2);
        other.next_u64();
        assert_eq!(a, rng_for(3, 7).next_u64());
        assert_ne!(a, rng_for(3, 8).next_u64());
    }
}
