use rand::Rng;
use rand_distr::StandardNormal;

use super::{c64, ComplexMatrix};

/// Random full-rank density matrix `G G† / Tr(G G†)` with a complex Ginibre `G`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_ginibre(dim, dim, rng);
    let m = g.matmul(&g.dagger());
    let tr = m.trace().re;
    m.scale_real(1.0 / tr).hermitian_part()
}

/// Random pure state as a `dim × 1` column.
pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_ginibre(dim, 1, rng);
    let norm = g.frobenius_norm();
    g.scale_real(1.0 / norm)
}

fn random_ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| c64(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("sized buffer")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{validate_density, Tolerance};
    use rand::SeedableRng;

    #[test]
    fn samples_are_states() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for d in [2, 3, 4] {
            validate_density(&random_density(d, &mut rng), Tolerance::new(1e-12).unwrap()).unwrap();
            assert!((random_ket(d, &mut rng).frobenius_norm() - 1.0).abs() < 1e-12);
        }
    }
}
