//! End-to-end acceptance suite. Runs as a plain binary so every criterion
//! prints one PASS/FAIL line under `cargo test`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use qutrit_core::channel::{ls_apply, ls_stinespring, wh_apply, ChannelRep};
use qutrit_core::choi::{
    analytic_choi, basis_decomposition, channel_from_choi, choi_direct, choi_fidelity, choi_linear,
};
use qutrit_core::circuit::{rng_for, unitary_of, Circuit, Gate, NoiseConfig};
use qutrit_core::decomp::{
    ls_channel_circuit, prep_basis_circuit, quasi_toffoli_circuit, w_tilde_circuit, wh_channel_circuit,
    QuasiToffoliVariant, SConfig,
};
use qutrit_core::layout::{place_and_route, reverse_cnot, validate, CouplingMap};
use qutrit_core::numkit::{c64, eigvalsh, equal_up_to_global_phase, random_density, ComplexMatrix, ONE, ZERO};
use qutrit_core::qutrit::{induced_channel, ChannelCircuit};
use qutrit_core::tomography::{collect, fidelity, reconstruct_qutrit};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

// ---------------------------------------------------------------- oracles

fn mat(rows: Vec<Vec<num_complex::Complex64>>) -> ComplexMatrix {
    ComplexMatrix::from_rows(rows).unwrap()
}

fn mul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut s = ZERO;
            for k in 0..a.cols() {
                s += a[(i, k)] * b[(k, j)];
            }
            out[(i, j)] = s;
        }
    }
    out
}

fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.cols(), a.rows());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

fn spin1() -> [ComplexMatrix; 3] {
    let s = c64(FRAC_1_SQRT_2, 0.0);
    let t = c64(0.0, FRAC_1_SQRT_2);
    [
        mat(vec![vec![ZERO, s, ZERO], vec![s, ZERO, s], vec![ZERO, s, ZERO]]),
        mat(vec![vec![ZERO, -t, ZERO], vec![t, ZERO, -t], vec![ZERO, t, ZERO]]),
        mat(vec![
            vec![ONE, ZERO, ZERO],
            vec![ZERO, ZERO, ZERO],
            vec![ZERO, ZERO, -ONE],
        ]),
    ]
}

/// `(JxρJx + JyρJy + JzρJz) / 2`
fn ls_oracle(rho: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(3, 3);
    for j in spin1() {
        out = &out + &mul(&mul(&j, rho), &j);
    }
    out.scale_real(0.5)
}

/// `(Tr ρ · I − ρᵀ) / 2`
fn wh_oracle(rho: &ComplexMatrix) -> ComplexMatrix {
    let tr = rho[(0, 0)] + rho[(1, 1)] + rho[(2, 2)];
    let mut out = ComplexMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            let id = if i == j { tr } else { ZERO };
            out[(i, j)] = (id - rho[(j, i)]) * 0.5;
        }
    }
    out
}

fn id_oracle(rho: &ComplexMatrix) -> ComplexMatrix {
    rho.clone()
}

/// The nine tomography inputs: |0⟩, |1⟩, |2⟩, then (|a⟩ + |b⟩)/√2 and (|a⟩ + i|b⟩)/√2
/// over the pairs (0,1), (0,2), (1,2).
fn input_kets() -> Vec<[num_complex::Complex64; 3]> {
    let z = ZERO;
    let mut kets = vec![[ONE, z, z], [z, ONE, z], [z, z, ONE]];
    for phase in [ONE, c64(0.0, 1.0)] {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let mut k = [z; 3];
            k[a] = c64(FRAC_1_SQRT_2, 0.0);
            k[b] = phase * FRAC_1_SQRT_2;
            kets.push(k);
        }
    }
    kets
}

fn input_densities() -> Vec<ComplexMatrix> {
    input_kets()
        .iter()
        .map(|k| mat((0..3).map(|i| (0..3).map(|j| k[i] * k[j].conj()).collect()).collect()))
        .collect()
}

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            d = d.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    d
}

fn within(dev: f64, tol: f64, what: &str) -> Outcome {
    if dev < tol {
        Ok(format!("{what} {dev:.1e} < {tol:.0e}"))
    } else {
        Err(format!("{what} {dev:.1e} >= {tol:.0e}"))
    }
}

fn random_states(seed: u64, n: usize) -> Vec<ComplexMatrix> {
    let mut rng = rng_for(seed, 0);
    (0..n).map(|_| random_density(3, &mut rng)).collect()
}

// ---------------------------------------------------------------- criteria

fn stinespring() -> Outcome {
    let dil = ls_stinespring();
    let u = dil.u();
    let mut dev: f64 = 0.0;
    for rho in input_densities() {
        // system-first register, environment starts in |0⟩
        let mut out = ComplexMatrix::zeros(3, 3);
        for a in 0..3 {
            for b in 0..3 {
                let mut s = ZERO;
                for e in 0..3 {
                    for x in 0..3 {
                        for y in 0..3 {
                            s += u[(3 * a + e, 3 * x)] * rho[(x, y)] * u[(3 * b + e, 3 * y)].conj();
                        }
                    }
                }
                out[(a, b)] = s;
            }
        }
        let lib = ls_apply(&rho).map_err(|e| e.to_string())?;
        dev = dev.max(max_diff(&out, &lib)).max(max_diff(&out, &ls_oracle(&rho)));
    }
    within(dev, 1e-10, "max deviation over 9 inputs")
}

fn covariance() -> Outcome {
    let z = ZERO;
    let w = mat(vec![vec![z, z, ONE], vec![z, -ONE, z], vec![ONE, z, z]]);
    let mut dev: f64 = 0.0;
    for rho in random_states(2, 200) {
        let lhs = ls_apply(&rho).map_err(|e| e.to_string())?;
        let rhs = wh_apply(&mul(&mul(&w, &rho), &adjoint(&w))).map_err(|e| e.to_string())?;
        dev = dev.max(max_diff(&lhs, &rhs));
    }
    within(dev, 1e-12, "max deviation over 200 states")
}

fn circuit_channels() -> Outcome {
    let mut states = input_densities();
    states.extend(random_states(3, 50));
    let mut dev: f64 = 0.0;
    let mut leak: f64 = 0.0;
    type Oracle = fn(&ComplexMatrix) -> ComplexMatrix;
    for cfg in SConfig::ALL {
        let pairs: [(ChannelCircuit, Oracle); 2] = [
            (wh_channel_circuit(cfg, None).map_err(|e| e.to_string())?, wh_oracle),
            (ls_channel_circuit(cfg, None).map_err(|e| e.to_string())?, ls_oracle),
        ];
        for (cc, oracle) in pairs {
            let ch = induced_channel(&cc, None);
            for rho in &states {
                let (out, l) = ch.apply(rho).map_err(|e| e.to_string())?;
                dev = dev.max(max_diff(&out, &oracle(rho)));
                leak = leak.max(l);
            }
        }
    }
    if leak >= 1e-10 {
        return Err(format!("leakage {leak:.1e}"));
    }
    within(dev, 1e-9, "4 configurations, 59 states, max deviation").map(|s| format!("{s}, leakage {leak:.1e}"))
}

fn choi_structure() -> Outcome {
    let wh = analytic_choi(&ChannelRep::wh()).map_err(|e| e.to_string())?;
    let mut expected = ComplexMatrix::zeros(9, 9);
    for i in 0..3 {
        for j in 0..3 {
            expected[(3 * i + j, 3 * i + j)] += c64(1.0 / 6.0, 0.0);
            expected[(3 * i + j, 3 * j + i)] -= c64(1.0 / 6.0, 0.0);
        }
    }
    let dev = max_diff(wh.matrix(), &expected);
    if dev >= 1e-12 {
        return Err(format!("WH Choi deviates from (I - SWAP)/6 by {dev:.1e}"));
    }
    for (name, rep) in [("LS", ChannelRep::ls()), ("WH", ChannelRep::wh())] {
        let mut ev = eigvalsh(analytic_choi(&rep).map_err(|e| e.to_string())?.matrix()).map_err(|e| e.to_string())?;
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let ok = ev
            .iter()
            .enumerate()
            .all(|(k, l)| (l - if k < 3 { 1.0 / 3.0 } else { 0.0 }).abs() < 1e-9);
        if !ok {
            return Err(format!("{name} spectrum {ev:?}"));
        }
    }
    Ok(format!(
        "WH Choi deviation {dev:.1e}; LS and WH spectra {{1/3 x3, 0 x6}}"
    ))
}

type Q = Complex<Ratio<i64>>;

fn q(re: i64, im: i64) -> Q {
    Complex::new(Ratio::from_integer(re), Ratio::from_integer(im))
}

/// Gauss–Jordan inverse over exact complex rationals.
fn invert(mut m: Vec<Vec<Q>>) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for j in 0..n {
                    let (a, b) = (m[col][j], inv[col][j]);
                    m[r][j] -= f * a;
                    inv[r][j] -= f * b;
                }
            }
        }
    }
    Some(inv)
}

/// Coefficients `a_ij^k` with `E_ij = Σ_k a_ij^k ρ_k`, solved exactly; row `3i + j`.
fn rederived_coefficients() -> Vec<Vec<Q>> {
    // integer kets; the densities are |ψ⟩⟨ψ| / ⟨ψ|ψ⟩
    let mut kets: Vec<[Q; 3]> = vec![
        [q(1, 0), q(0, 0), q(0, 0)],
        [q(0, 0), q(1, 0), q(0, 0)],
        [q(0, 0), q(0, 0), q(1, 0)],
    ];
    for phase in [q(1, 0), q(0, 1)] {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let mut k = [q(0, 0); 3];
            k[a] = q(1, 0);
            k[b] = phase;
            kets.push(k);
        }
    }
    // frame[idx][k] = (ρ_k)_idx with idx = 3r + c
    let mut frame = vec![vec![Q::zero(); 9]; 9];
    for (k, ket) in kets.iter().enumerate() {
        let norm: Q = ket.iter().map(|x| x * x.conj()).fold(Q::zero(), |a, b| a + b);
        for r in 0..3 {
            for c in 0..3 {
                frame[3 * r + c][k] = ket[r] * ket[c].conj() / norm;
            }
        }
    }
    let inv = invert(frame).expect("the nine inputs span all 3x3 matrices");
    (0..9).map(|row| (0..9).map(|k| inv[k][row]).collect()).collect()
}

fn to_f64(x: Ratio<i64>) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn two_route_choi() -> Outcome {
    let mut dev: f64 = 0.0;
    type Oracle = fn(&ComplexMatrix) -> ComplexMatrix;
    let cases: [(ChannelRep, Oracle); 3] = [
        (ChannelRep::ls(), ls_oracle),
        (ChannelRep::wh(), wh_oracle),
        (ChannelRep::identity(3), id_oracle),
    ];
    for (rep, oracle) in cases {
        let outs: Vec<_> = input_densities().iter().map(oracle).collect();
        let lin = choi_linear(&outs).map_err(|e| e.to_string())?;
        dev = dev.max(max_diff(
            lin.matrix(),
            analytic_choi(&rep).map_err(|e| e.to_string())?.matrix(),
        ));
    }
    if dev >= 1e-10 {
        return Err(format!("linear vs analytic Choi {dev:.1e}"));
    }
    let stored = basis_decomposition().coeffs;
    let exact = rederived_coefficients();
    for (row, line) in exact.iter().enumerate() {
        for (k, v) in line.iter().enumerate() {
            let want = c64(to_f64(v.re), to_f64(v.im));
            if stored[(row, k)] != want {
                return Err(format!(
                    "coefficient ({row}, {k}) stored {} but rederived {want}",
                    stored[(row, k)]
                ));
            }
        }
    }
    Ok(format!(
        "linear vs analytic Choi {dev:.1e} < 1e-10; 81 coefficients rederived exactly"
    ))
}

fn roundtrip() -> Outcome {
    let mut dev: f64 = 0.0;
    type Oracle = fn(&ComplexMatrix) -> ComplexMatrix;
    let cases: [(ChannelRep, Oracle); 3] = [
        (ChannelRep::ls(), ls_oracle),
        (ChannelRep::wh(), wh_oracle),
        (ChannelRep::identity(3), id_oracle),
    ];
    for (rep, oracle) in cases {
        let omega = analytic_choi(&rep).map_err(|e| e.to_string())?;
        for rho in random_states(6, 100) {
            dev = dev.max(max_diff(
                &channel_from_choi(&omega, &rho).map_err(|e| e.to_string())?,
                &oracle(&rho),
            ));
        }
    }
    within(dev, 1e-10, "max deviation over 3 channels x 100 states")
}

/// Mean output fidelity of prep → channel → two-qubit tomography over the nine inputs.
fn pipeline_fidelity(
    cc: &ChannelCircuit,
    oracle: fn(&ComplexMatrix) -> ComplexMatrix,
    shots: u64,
    seed: u64,
) -> Result<f64, String> {
    let mut total = 0.0;
    for (k, rho) in input_densities().iter().enumerate() {
        let mut c = prep_basis_circuit(k + 1)
            .and_then(|p| p.embedded(cc.n_qubits(), &cc.system))
            .map_err(|e| e.to_string())?;
        c.append(&cc.circuit).map_err(|e| e.to_string())?;
        let rec = collect(
            &c,
            &cc.system,
            shots,
            seed.wrapping_mul(16).wrapping_add(k as u64),
            None,
        )
        .map_err(|e| e.to_string())?;
        let (est, _) = reconstruct_qutrit(&rec).map_err(|e| e.to_string())?;
        total += fidelity(&oracle(rho), &est).map_err(|e| e.to_string())?;
    }
    Ok(total / 9.0)
}

fn simulator_pipeline() -> Outcome {
    let mut summary = Vec::new();
    type Oracle = fn(&ComplexMatrix) -> ComplexMatrix;
    let cases: [(&str, ChannelCircuit, Oracle); 2] = [
        (
            "WH",
            wh_channel_circuit(SConfig::default(), None).map_err(|e| e.to_string())?,
            wh_oracle,
        ),
        (
            "LS",
            ls_channel_circuit(SConfig::default(), None).map_err(|e| e.to_string())?,
            ls_oracle,
        ),
    ];
    for (name, cc, oracle) in &cases {
        for (shots, floor) in [(8192u64, 0.97), (65536, 0.99)] {
            let mut mean = 0.0;
            for seed in 0..20 {
                mean += pipeline_fidelity(cc, *oracle, shots, seed)? / 20.0;
            }
            if mean < floor {
                return Err(format!("{name} at {shots} shots: mean fidelity {mean:.4} < {floor}"));
            }
            summary.push(format!("{name}@{shots} {mean:.4}"));
        }
    }
    Ok(format!("mean output fidelity {}", summary.join(", ")))
}

fn direct_choi() -> Outcome {
    let mut summary = Vec::new();
    for (name, cc, rep) in [
        ("WH", wh_channel_circuit(SConfig::default(), None), ChannelRep::wh()),
        ("LS", ls_channel_circuit(SConfig::default(), None), ChannelRep::ls()),
    ] {
        let cc = cc.map_err(|e| e.to_string())?;
        let (omega, _) = choi_direct(&cc, 1_000_000, 11, None, None).map_err(|e| e.to_string())?;
        let omega = omega.projected().map_err(|e| e.to_string())?;
        let f = choi_fidelity(&analytic_choi(&rep).map_err(|e| e.to_string())?, &omega).map_err(|e| e.to_string())?;
        if f < 0.99 {
            return Err(format!("{name} Choi fidelity {f:.4} < 0.99"));
        }
        summary.push(format!("{name} {f:.4}"));
    }
    Ok(format!("Choi fidelity at 1e6 shots: {}", summary.join(", ")))
}

fn noise_degradation() -> Outcome {
    let levels = [0.0, 0.02, 0.05, 0.1];
    let mut summary = Vec::new();
    for (name, cc, rep) in [
        ("WH", wh_channel_circuit(SConfig::default(), None), ChannelRep::wh()),
        ("LS", ls_channel_circuit(SConfig::default(), None), ChannelRep::ls()),
    ] {
        let cc = cc.map_err(|e| e.to_string())?;
        let th = analytic_choi(&rep).map_err(|e| e.to_string())?;
        let mut means = Vec::new();
        for p2 in levels {
            let noise = NoiseConfig::depolarizing(0.0, p2).map_err(|e| e.to_string())?;
            let mut mean = 0.0;
            for seed in 0..5 {
                let (omega, _) = choi_direct(&cc, 8192, 100 + seed, Some(&noise), None).map_err(|e| e.to_string())?;
                let omega = omega.projected().map_err(|e| e.to_string())?;
                mean += choi_fidelity(&th, &omega).map_err(|e| e.to_string())? / 5.0;
            }
            means.push(mean);
        }
        if means.windows(2).any(|w| w[1] > w[0]) {
            return Err(format!("{name} fidelity not monotone: {means:?}"));
        }
        if means[3] >= 0.9 {
            return Err(format!("{name} fidelity {:.4} at p2 = 0.1 is not below 0.9", means[3]));
        }
        summary.push(format!(
            "{name} [{}]",
            means.iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>().join(", ")
        ));
    }
    Ok(format!("p2 = {levels:?}: {}", summary.join(", ")))
}

fn decompositions() -> Outcome {
    let z = ZERO;
    let i1 = ComplexMatrix::identity(2);
    let x = mat(vec![vec![z, ONE], vec![ONE, z]]);
    let y = mat(vec![vec![z, c64(0.0, -1.0)], vec![c64(0.0, 1.0), z]]);
    let kron2 = |a: &ComplexMatrix, b: &ComplexMatrix| {
        let mut out = ComplexMatrix::zeros(4, 4);
        for r in 0..4 {
            for c in 0..4 {
                out[(r, c)] = a[(r / 2, c / 2)] * b[(r % 2, c % 2)];
            }
        }
        out
    };
    // control on the second qubit, target on the first
    let mut cnot21 = ComplexMatrix::zeros(4, 4);
    for (r, c) in [(0, 0), (2, 2), (1, 3), (3, 1)] {
        cnot21[(r, c)] = ONE;
    }
    let expected = mul(&mul(&kron2(&i1, &y), &cnot21), &kron2(&i1, &x)).scale(c64(0.0, 1.0));
    let w = unitary_of(&w_tilde_circuit()).map_err(|e| e.to_string())?;
    let dw = max_diff(&w, &expected);
    if dw >= 1e-12 {
        return Err(format!("W circuit deviates by {dw:.1e}"));
    }
    let mut qt = ComplexMatrix::identity(8);
    qt[(4, 4)] = -ONE;
    qt[(6, 6)] = z;
    qt[(7, 7)] = z;
    qt[(6, 7)] = ONE;
    qt[(7, 6)] = ONE;
    for v in [QuasiToffoliVariant::A, QuasiToffoliVariant::B] {
        let u = unitary_of(&quasi_toffoli_circuit(v)).map_err(|e| e.to_string())?;
        if !equal_up_to_global_phase(&u, &qt, 1e-12) {
            return Err(format!("quasi-Toffoli variant {v:?} does not match"));
        }
    }
    let mut cnot12 = ComplexMatrix::zeros(4, 4);
    for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        cnot12[(r, c)] = ONE;
    }
    let frag = unitary_of(&Circuit::from_gates(2, reverse_cnot(0, 1)).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let dr = max_diff(&frag, &cnot12);
    if dr >= 1e-12 {
        return Err(format!("reversed CNOT deviates by {dr:.1e}"));
    }
    Ok(format!("W {dw:.1e}; quasi-Toffoli A and B match; reversal {dr:.1e}"))
}

fn random_circuit(rng: &mut impl Rng) -> Circuit {
    let len = rng.gen_range(5..40);
    let mut c = Circuit::new(4).unwrap();
    for _ in 0..len {
        let q = rng.gen_range(0..4);
        let g = match rng.gen_range(0..5) {
            0 | 1 => {
                let mut t = rng.gen_range(0..3);
                if t >= q {
                    t += 1;
                }
                Gate::cnot(q, t)
            }
            2 => Gate::u3(
                rng.gen_range(-3.2..3.2),
                rng.gen_range(-3.2..3.2),
                rng.gen_range(-3.2..3.2),
                q,
            ),
            3 => Gate::h(q),
            _ => Gate::u1(rng.gen_range(-3.2..3.2), q),
        };
        c.push(g).unwrap();
    }
    c
}

/// The 4-qubit unitary acting on physical `wires` of a 5-qubit register, identity elsewhere.
fn placed_unitary(u: &ComplexMatrix, wires: &[usize]) -> ComplexMatrix {
    let spare = (0..5).find(|w| !wires.contains(w)).unwrap();
    let logical = |x: usize| wires.iter().fold(0, |acc, &w| (acc << 1) | ((x >> (4 - w)) & 1));
    let mut out = ComplexMatrix::zeros(32, 32);
    for r in 0..32 {
        for c in 0..32 {
            if (r >> (4 - spare)) & 1 == (c >> (4 - spare)) & 1 {
                out[(r, c)] = u[(logical(r), logical(c))];
            }
        }
    }
    out
}

fn routing() -> Outcome {
    let map = CouplingMap::preset("ibmqx4").map_err(|e| e.to_string())?;
    let mut rng = rng_for(11, 0);
    let mut cnots = (0, 0);
    for n in 0..200 {
        let c = random_circuit(&mut rng);
        let mut phys: Vec<usize> = (0..5).collect();
        phys.shuffle(&mut rng);
        let wires = &phys[..4];
        let routed = place_and_route(&c, wires, &map).map_err(|e| e.to_string())?;
        if !validate(&routed, &map).is_empty() {
            return Err(format!("circuit {n}: routed circuit uses illegal CNOTs"));
        }
        let want = placed_unitary(&unitary_of(&c).map_err(|e| e.to_string())?, wires);
        let got = unitary_of(&routed).map_err(|e| e.to_string())?;
        if !equal_up_to_global_phase(&got, &want, 1e-9) {
            return Err(format!("circuit {n} on wires {wires:?}: unitary changed"));
        }
        cnots.0 += c.cnot_count();
        cnots.1 += routed.cnot_count();
    }
    Ok(format!(
        "200 circuits valid and unitary-preserving; CNOTs {} -> {}",
        cnots.0, cnots.1
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("stinespring_correctness", stinespring),
        ("covariance_identity", covariance),
        ("circuit_channel_equivalence", circuit_channels),
        ("choi_structure", choi_structure),
        ("two_route_choi", two_route_choi),
        ("choi_roundtrip", roundtrip),
        ("simulator_pipeline_fidelity", simulator_pipeline),
        ("direct_choi_pipeline", direct_choi),
        ("noise_degradation", noise_degradation),
        ("decomposition_identities", decompositions),
        ("routing_semantics", routing),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.2}s)", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
