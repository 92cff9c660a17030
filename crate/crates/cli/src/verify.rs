//! Named invariant checks run by `qutrit verify`.

use qutrit_core::channel::{covariance_unitary, ls_apply, ls_stinespring, wh_apply, wh_stinespring, ChannelRep};
use qutrit_core::choi::{analytic_choi, basis_decomposition, channel_from_choi, choi_linear};
use qutrit_core::circuit::{rng_for, unitary_of, Circuit, Gate};
use qutrit_core::decomp::{
    ls_channel_circuit, quasi_toffoli_circuit, quasi_toffoli_matrix, w_tilde_circuit, w_tilde_matrix,
    wh_channel_circuit, QuasiToffoliVariant, SConfig,
};
use qutrit_core::layout::{reverse_cnot, validate, CouplingMap};
use qutrit_core::numkit::{
    eigvalsh, equal_up_to_global_phase, is_unitary, random_density, ComplexMatrix, Tolerance, ONE,
};
use qutrit_core::qutrit::{basis_densities, induced_channel, ChannelCircuit};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Outcome = Result<String, String>;
type Suite<'a> = Vec<(&'static str, Box<dyn Fn() -> Outcome + 'a>)>;

type Pair = qutrit_core::Result<(ComplexMatrix, ComplexMatrix)>;

fn max_dev(pairs: impl IntoIterator<Item = Pair>) -> Result<f64, String> {
    let mut dev: f64 = 0.0;
    for p in pairs {
        let (a, b) = p.map_err(err)?;
        dev = dev.max(a.max_abs_diff(&b));
    }
    Ok(dev)
}

fn within(dev: f64, tol: f64) -> Outcome {
    if dev <= tol {
        Ok(format!("max deviation {dev:.1e}"))
    } else {
        Err(format!("max deviation {dev:.1e} exceeds {tol:.0e}"))
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ls_dilation() -> Outcome {
    let d = ls_stinespring();
    if !is_unitary(d.u(), Tolerance::new(1e-12).map_err(err)?) {
        return Err("dilation is not unitary".into());
    }
    let dev = max_dev(basis_densities().into_iter().map(|r| Ok((d.map(&r)?, ls_apply(&r)?))))?;
    within(dev, 1e-10)
}

fn wh_dilation() -> Outcome {
    let d = wh_stinespring();
    let dev = max_dev(basis_densities().into_iter().map(|r| Ok((d.map(&r)?, wh_apply(&r)?))))?;
    within(dev, 1e-10)
}

fn covariance() -> Outcome {
    let w = covariance_unitary();
    let mut rng = rng_for(2024, 0);
    let dev = max_dev((0..200).map(|_| {
        let rho = random_density(3, &mut rng);
        Ok((ls_apply(&rho)?, wh_apply(&w.conjugate(&rho))?))
    }))?;
    within(dev, 1e-12)
}

fn swap9() -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(9, 9);
    for i in 0..3 {
        for j in 0..3 {
            s[(3 * i + j, 3 * j + i)] = ONE;
        }
    }
    s
}

fn wh_choi() -> Outcome {
    let omega = analytic_choi(&ChannelRep::wh()).map_err(err)?;
    let expected = (&ComplexMatrix::identity(9) - &swap9()).scale_real(1.0 / 6.0);
    within(omega.matrix().max_abs_diff(&expected), 1e-12)
}

fn choi_spectra() -> Outcome {
    for rep in [ChannelRep::ls(), ChannelRep::wh()] {
        let ev = eigvalsh(analytic_choi(&rep).map_err(err)?.matrix()).map_err(err)?;
        let ok = ev[..3].iter().all(|l| (l - 1.0 / 3.0).abs() < 1e-9) && ev[3..].iter().all(|l| l.abs() < 1e-9);
        if !ok {
            return Err(format!("spectrum {ev:?}"));
        }
    }
    Ok("{1/3 x3, 0 x6}".into())
}

fn ls_kraus_rank() -> Outcome {
    let ev = eigvalsh(analytic_choi(&ChannelRep::ls()).map_err(err)?.matrix()).map_err(err)?;
    let rank = ev.iter().filter(|&&l| l > 1e-9).count();
    if rank == 3 {
        Ok("3".into())
    } else {
        Err(format!("{rank}"))
    }
}

fn basis_frame() -> Outcome {
    let dec = basis_decomposition();
    let mut dev: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            dev = dev.max(dec.reconstruct(i, j).max_abs_diff(&ComplexMatrix::unit(3, i, j)));
        }
    }
    // Independent frame ⇒ the reconstructing coefficients are the unique solution.
    let mut frame = ComplexMatrix::zeros(9, 9);
    for (k, r) in dec.basis_states.iter().enumerate() {
        for (idx, v) in r.data().iter().enumerate() {
            frame[(idx, k)] = *v;
        }
    }
    let smallest = eigvalsh(&frame.dagger().matmul(&frame))
        .map_err(err)?
        .last()
        .copied()
        .unwrap_or(0.0);
    if smallest < 1e-6 {
        return Err(format!(
            "input states are not a frame (smallest Gram eigenvalue {smallest:e})"
        ));
    }
    if dev == 0.0 {
        Ok("exact".into())
    } else {
        within(dev, 1e-15)
    }
}

fn choi_routes() -> Outcome {
    let mut dev: f64 = 0.0;
    for rep in [ChannelRep::ls(), ChannelRep::wh(), ChannelRep::identity(3)] {
        let outs = basis_densities()
            .iter()
            .map(|r| rep.map(r))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let lin = choi_linear(&outs).map_err(err)?;
        dev = dev.max(lin.matrix().max_abs_diff(analytic_choi(&rep).map_err(err)?.matrix()));
    }
    within(dev, 1e-10)
}

fn choi_roundtrip() -> Outcome {
    let mut rng = rng_for(26, 0);
    let mut dev: f64 = 0.0;
    for rep in [ChannelRep::ls(), ChannelRep::wh(), ChannelRep::identity(3)] {
        let omega = analytic_choi(&rep).map_err(err)?;
        for _ in 0..100 {
            let rho = random_density(3, &mut rng);
            dev = dev.max(
                channel_from_choi(&omega, &rho)
                    .map_err(err)?
                    .max_abs_diff(&rep.map(&rho).map_err(err)?),
            );
        }
    }
    within(dev, 1e-10)
}

fn w_tilde() -> Outcome {
    let u = unitary_of(&w_tilde_circuit()).map_err(err)?;
    within(u.max_abs_diff(&w_tilde_matrix(std::f64::consts::PI)), 1e-12)
}

fn quasi_toffoli() -> Outcome {
    for v in [QuasiToffoliVariant::A, QuasiToffoliVariant::B] {
        let u = unitary_of(&quasi_toffoli_circuit(v)).map_err(err)?;
        if !equal_up_to_global_phase(&u, &quasi_toffoli_matrix(), 1e-12) {
            return Err(format!("variant {v:?} differs"));
        }
    }
    Ok(format!(
        "{} CNOTs",
        quasi_toffoli_circuit(QuasiToffoliVariant::A).cnot_count()
    ))
}

fn cnot_reversal() -> Outcome {
    let frag = unitary_of(&Circuit::from_gates(2, reverse_cnot(0, 1)).map_err(err)?).map_err(err)?;
    let direct = unitary_of(&Circuit::from_gates(2, [Gate::cnot(0, 1)]).map_err(err)?).map_err(err)?;
    within(frag.max_abs_diff(&direct), 1e-12)
}

fn channel_dev(cc: &ChannelCircuit, reference: fn(&ComplexMatrix) -> qutrit_core::Result<ComplexMatrix>) -> Outcome {
    let ch = induced_channel(cc, None);
    let mut dev: f64 = 0.0;
    for rho in basis_densities() {
        let (out, leak) = ch.apply(&rho).map_err(err)?;
        if leak > 1e-10 {
            return Err(format!("leakage {leak:e}"));
        }
        dev = dev.max(out.max_abs_diff(&reference(&rho).map_err(err)?));
    }
    within(dev, 1e-9)
}

fn circuits(ls: bool) -> Outcome {
    let mut last = String::new();
    for cfg in SConfig::ALL {
        last = if ls {
            channel_dev(&ls_channel_circuit(cfg, None).map_err(err)?, ls_apply)?
        } else {
            channel_dev(&wh_channel_circuit(cfg, None).map_err(err)?, wh_apply)?
        };
    }
    Ok(format!("all 4 configurations, {last}"))
}

fn routing(coupling: &str) -> Outcome {
    let map = CouplingMap::load(coupling).map_err(err)?;
    let cfg = SConfig::default();
    let wh = wh_channel_circuit(cfg, Some(&map)).map_err(err)?;
    let ls = ls_channel_circuit(cfg, Some(&map)).map_err(err)?;
    for cc in [&wh, &ls] {
        let bad = validate(&cc.circuit, &map);
        if !bad.is_empty() {
            return Err(format!("{} illegal CNOTs", bad.len()));
        }
    }
    channel_dev(&wh, wh_apply)?;
    channel_dev(&ls, ls_apply)?;
    Ok(format!(
        "{coupling}: {} + {} CNOTs",
        wh.circuit.cnot_count(),
        ls.circuit.cnot_count()
    ))
}

/// Runs every check; `coupling` selects the map used by the routing suite.
pub fn run_all(coupling: &str) -> Vec<Check> {
    let suite: Suite = vec![
        ("ls_dilation", Box::new(ls_dilation)),
        ("wh_dilation", Box::new(wh_dilation)),
        ("covariance", Box::new(covariance)),
        ("wh_choi_structure", Box::new(wh_choi)),
        ("choi_spectra", Box::new(choi_spectra)),
        ("ls_kraus_rank", Box::new(ls_kraus_rank)),
        ("basis_decomposition", Box::new(basis_frame)),
        ("choi_two_route", Box::new(choi_routes)),
        ("choi_roundtrip", Box::new(choi_roundtrip)),
        ("w_tilde_decomposition", Box::new(w_tilde)),
        ("quasi_toffoli_decomposition", Box::new(quasi_toffoli)),
        ("cnot_reversal", Box::new(cnot_reversal)),
        ("wh_circuit_channel", Box::new(|| circuits(false))),
        ("ls_circuit_channel", Box::new(|| circuits(true))),
        ("routing", Box::new(move || routing(coupling))),
    ];
    suite
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Check { name, passed, detail }
        })
        .collect()
}
