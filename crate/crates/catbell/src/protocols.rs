//! One function per protocol, each returning a [`ResultRecord`].
//!
//! Parallel sections collect in index order and every random stream is keyed
//! by `(seed, index)`, so output does not depend on the thread count.

use catbell_core::bell::{chsh, chsh_analytic, violation_scan, violation_threshold, ChshMode};
use catbell_core::bosonic::{annihilation, cat, coherent, number_op, Parity};
use catbell_core::encoding::{
    entangled_analytic, prepare_modes, rotation_fidelity, EncodingParams, Factorization, ModeSel,
};
use catbell_core::gates::{
    cnot_ion_control, cnot_mode_control, swap_map, transfer_fidelity, truth_table, u_ev,
    u_ev_surrogate, u_swap, u_ve_ideal, u_ve_literal, EvRealization, GateReport, UevCalibration,
};
use catbell_core::noise::{
    code_amplitudes, evolve_lindblad, mixed_bell, mode_parity, sample_trajectory, trajectory_rng,
    HeatingParams, JumpCounts,
};
use catbell_core::pipeline::{
    finish_pipeline, heating_trajectory, mixture_from_trajectories, pipeline_delta,
    stage_heat_single_jump, stage_prepare, PipelineResult,
};
use catbell_core::tensor::{expectation, expectation_dm, partial_trace_pure, state_fidelity};
use catbell_core::{DensityMatrix, C64, MODE_A};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, HeatingMode, Protocol};
use crate::error::Result;
use crate::record::{Cell, Provenance, ResultRecord, Table};

/// Runs the configured protocol.
pub fn run_protocol(config: &ExperimentConfig) -> Result<ResultRecord> {
    let start = std::time::Instant::now();
    let mut record = ResultRecord::new(config.protocol.name(), config.echo());
    match config.protocol {
        Protocol::Prepare => prepare(config, &mut record)?,
        Protocol::Rotate => rotate(config, &mut record)?,
        Protocol::SwapReport => swap_report(config, &mut record)?,
        Protocol::HeatSweep => heat_sweep(config, &mut record)?,
        Protocol::BellScan => bell_scan(config, &mut record)?,
        Protocol::FullPipeline => {
            full_pipeline(config, &mut record)?;
        }
    }
    if config.output.record_timing {
        record.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(record)
}

fn prepare(config: &ExperimentConfig, record: &mut ResultRecord) -> Result<()> {
    let p = config.encoding_params()?;
    let prepared = prepare_modes(&p)?;
    let on_b = entangled_analytic(&p, Factorization::CatsOnB)?;
    let on_a = entangled_analytic(&p, Factorization::CatsOnA)?;
    let entropy = partial_trace_pure(&prepared, &[MODE_A])?.entropy_bits();
    let amps = code_amplitudes(&prepared, &p)?;
    record.result(
        "preparation_fidelity",
        state_fidelity(&prepared, &on_b)?,
        Provenance::Exact,
    );
    record.result(
        "factorization_agreement",
        state_fidelity(&on_a, &on_b)?,
        Provenance::Exact,
    );
    record.result("mode_a_entropy_bits", entropy, Provenance::Exact);
    record.result("norm", prepared.norm(), Provenance::Exact);
    let mut table = Table::new(&["x", "y", "re", "im", "weight"]);
    for (k, a) in amps.iter().enumerate() {
        table.push(vec![
            ((k >> 1) as f64).into(),
            ((k & 1) as f64).into(),
            a.re.into(),
            a.im.into(),
            a.norm_sqr().into(),
        ]);
    }
    record.table = table;
    Ok(())
}

fn rotate(config: &ExperimentConfig, record: &mut ResultRecord) -> Result<()> {
    let p = config.encoding_params()?;
    let sel = config.rotate_mode();
    let fids = config
        .rotate
        .thetas
        .par_iter()
        .map(|&theta| rotation_fidelity(theta, sel, &p))
        .collect::<Result<Vec<_>, _>>()?;
    let tol = catbell_core::encoding::RotationFidelity::tolerance(p.amplitude(sel));
    let mut table = Table::new(&[
        "theta",
        "epsilon",
        "branch0",
        "branch1",
        "analytic",
        "max_error",
    ]);
    let mut worst = 0.0f64;
    for f in &fids {
        worst = worst.max(f.max_error());
        table.push(vec![
            f.theta.into(),
            f.epsilon.into(),
            f.branch0.into(),
            f.branch1.into(),
            f.analytic.into(),
            f.max_error().into(),
        ]);
    }
    record.result("max_error", worst, Provenance::Exact);
    record.result("tolerance", tol, Provenance::Analytic);
    record.table = table;
    record
        .notes
        .push("D(iε) rotates the code by 2αε; ε = θ/(2α)".into());
    Ok(())
}

fn push_report(table: &mut Table, report: &GateReport) {
    for row in &report.rows {
        table.push(vec![
            report.gate.as_str().into(),
            format!("{}{}", row.input.0, row.input.1).into(),
            format!("{}{}", row.target.0, row.target.1).into(),
            row.fidelity.into(),
            row.overlap.re.into(),
            row.overlap.im.into(),
        ]);
    }
}

fn swap_report(config: &ExperimentConfig, record: &mut ResultRecord) -> Result<()> {
    let p = config.encoding_params()?;
    let sel = ModeSel::A;
    let calibration = match config.ev() {
        EvRealization::Displacement(c) => c,
        EvRealization::Surrogate => UevCalibration::QuarterTurn,
    };
    let ve = u_ve_ideal(sel, &p)?;
    let (literal, literal_report) = u_ve_literal(sel, &p)?;
    let ev = u_ev(sel, &p, calibration)?;
    let surrogate = u_ev_surrogate(sel, &p)?;
    let swap = u_swap(sel, &p, config.ve(), config.ev())?;
    let reports = [
        truth_table("u_ve_ideal", &ve, sel, &p, cnot_mode_control)?,
        GateReport {
            rows: truth_table("u_ve_literal", &literal, sel, &p, cnot_mode_control)?.rows,
            ..literal_report
        },
        truth_table("u_ev", &ev, sel, &p, cnot_ion_control)?,
        truth_table("u_ev_surrogate", &surrogate, sel, &p, cnot_ion_control)?,
        truth_table("u_swap", &swap, sel, &p, swap_map)?,
    ];
    let mut table = Table::new(&[
        "gate",
        "input",
        "target",
        "fidelity",
        "overlap_re",
        "overlap_im",
    ]);
    for r in &reports {
        push_report(&mut table, r);
        record.result(
            &format!("{}_min_fidelity", r.gate),
            r.min_fidelity(),
            Provenance::Exact,
        );
        record.result(
            &format!("{}_unitarity_residual", r.gate),
            r.unitarity_residual,
            Provenance::Exact,
        );
        record.notes.push(format!("{}: {}", r.gate, r.note));
    }
    let eps = calibration.epsilon(p.amplitude(sel));
    record.result("u_ev_epsilon", eps, Provenance::Analytic);
    record.result(
        "u_ev_gaussian_law",
        (-eps * eps).exp(),
        Provenance::Analytic,
    );
    record.result(
        "swap_transfer_fidelity",
        transfer_fidelity(&swap, sel, &p)?,
        Provenance::Exact,
    );
    record.table = table;
    Ok(())
}

struct SweepPoint {
    time: f64,
    mean_n: f64,
    parity: f64,
    a: C64,
    trace: f64,
}

fn heat_sweep(config: &ExperimentConfig, record: &mut ResultRecord) -> Result<()> {
    let p = config.encoding_params()?;
    let heat = config.heating_params()?;
    let alpha = p.alpha;
    let mode = p.mode_a;
    let n_op = number_op(&mode)?;
    let a_op = annihilation(&mode)?;
    let cat0 = cat(C64::new(alpha, 0.0), Parity::Even, &mode)?;
    let coh0 = coherent(C64::new(alpha, 0.0), &mode)?;
    let segments = config.noise.samples;
    let segment = HeatingParams::new(heat.gamma_a, 0.0, heat.duration / segments as f64, heat.dt)?;

    let parity_of = |rho: &DensityMatrix| -> f64 {
        (0..mode.cutoff)
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * rho.matrix()[(k, k)].re)
            .sum()
    };
    let mut rho_cat = DensityMatrix::from_pure(&cat0);
    let mut rho_coh = DensityMatrix::from_pure(&coh0);
    let mut points = Vec::with_capacity(segments + 1);
    for k in 0..=segments {
        if k > 0 {
            rho_cat = evolve_lindblad(&rho_cat, &segment, &[0])?;
            rho_coh = evolve_lindblad(&rho_coh, &segment, &[0])?;
        }
        points.push(SweepPoint {
            time: heat.duration * k as f64 / segments as f64,
            mean_n: expectation_dm(&n_op, &rho_cat)?.re,
            parity: parity_of(&rho_cat),
            a: expectation_dm(&a_op, &rho_coh)?,
            trace: rho_cat.trace().re,
        });
    }
    let n0 = points[0].mean_n;
    let a0 = points[0].a;
    let mut table = Table::new(&[
        "time",
        "mean_n",
        "mean_n_analytic",
        "parity",
        "coherent_a_re",
        "coherent_a_im",
        "trace",
    ]);
    for pt in &points {
        table.push(vec![
            pt.time.into(),
            pt.mean_n.into(),
            (n0 + heat.gamma_a * pt.time).into(),
            pt.parity.into(),
            pt.a.re.into(),
            pt.a.im.into(),
            pt.trace.into(),
        ]);
    }
    let last = points.last().expect("at least one point");
    let rate = if heat.duration > 0.0 {
        (last.mean_n - n0) / heat.duration
    } else {
        0.0
    };
    record.result("dn_dt", rate, Provenance::Exact);
    record.result("gamma", heat.gamma_a, Provenance::Analytic);
    record.result(
        "max_a_drift",
        points
            .iter()
            .map(|pt| (pt.a - a0).norm())
            .fold(0.0, f64::max),
        Provenance::Exact,
    );
    record.result("final_parity", last.parity, Provenance::Exact);
    record.result(
        "delta_analytic",
        heat.gamma_a * alpha * alpha * heat.duration,
        Provenance::Analytic,
    );

    if config.noise.heating == HeatingMode::Trajectories {
        let model = config.rate_model();
        let count = config.noise.trajectories;
        let seed = config.seed;
        let samples = (0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = trajectory_rng(seed, i as u64);
                let t = sample_trajectory(&cat0, &heat, &[0], model, &mut rng)?;
                Ok((
                    expectation(&n_op, &t.state)?.re,
                    mode_parity(&t.state, 0)?,
                    t.counts(),
                ))
            })
            .collect::<Result<Vec<_>, catbell_core::Error>>()?;
        let ns: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ps: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let mut counts = JumpCounts::default();
        samples.iter().for_each(|s| counts.add(&s.2));
        let (n_mc, n_se) = mean_se(&ns);
        let (p_mc, p_se) = mean_se(&ps);
        record.result("mc_mean_n", n_mc, Provenance::Sampled);
        record.result("mc_mean_n_se", n_se, Provenance::Sampled);
        record.result("mc_parity", p_mc, Provenance::Sampled);
        record.result("mc_parity_se", p_se, Provenance::Sampled);
        record.result(
            "mc_jumps_per_trajectory",
            counts.total() as f64 / count as f64,
            Provenance::Sampled,
        );
    }
    record.table = table;
    Ok(())
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn bell_scan(config: &ExperimentConfig, record: &mut ResultRecord) -> Result<()> {
    let angles = config.angles();
    let grid = &config.bell.delta_grid;
    let seed = config.seed;
    let values = grid
        .par_iter()
        .enumerate()
        .map(|(i, &d)| {
            let mode = config.chsh_mode(seed.wrapping_add(i as u64));
            chsh(&mixed_bell(d)?, &angles, mode).map(|o| o.b)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["delta", "B"]);
    for (&d, &b) in grid.iter().zip(&values) {
        table.push(vec![d.into(), b.into()]);
    }
    let prov = match config.chsh_mode(seed) {
        ChshMode::Exact => Provenance::Exact,
        ChshMode::Sampled { .. } => Provenance::Sampled,
    };
    for (i, (&d, &b)) in grid.iter().zip(&values).enumerate() {
        record.result(&format!("B[{i}]"), b, prov);
        record.result(
            &format!("B_analytic[{i}]"),
            chsh_analytic(d),
            Provenance::Analytic,
        );
    }
    let scan = violation_scan(grid, &angles)?;
    if let Some((lo, hi)) = scan.bracket {
        record.result("crossing_lower", lo, Provenance::Exact);
        record.result("crossing_upper", hi, Provenance::Exact);
    }
    if let Some(c) = scan.crossing {
        record.result("crossing", c, Provenance::Exact);
    }
    record.result("threshold", violation_threshold(), Provenance::Analytic);
    record.table = table;
    Ok(())
}

/// Runs the end-to-end protocol, generating heating trajectories in
/// parallel when asked to.
pub fn run_pipeline(config: &ExperimentConfig) -> Result<(PipelineResult, Option<JumpCounts>)> {
    let pc = config.pipeline_config()?;
    let encoding: &EncodingParams = &pc.encoding;
    let prepared = stage_prepare(encoding)?;
    let (heated, counts) = match config.noise.heating {
        HeatingMode::SingleJump => (
            stage_heat_single_jump(&prepared, encoding, &pc.heating)?,
            None,
        ),
        HeatingMode::Trajectories => {
            let model = config.rate_model();
            let trajectories = (0..config.noise.trajectories)
                .into_par_iter()
                .map(|i| heating_trajectory(&prepared, &pc.heating, model, config.seed, i))
                .collect::<Result<Vec<_>, _>>()?;
            let mut counts = JumpCounts::default();
            trajectories.iter().for_each(|t| counts.add(&t.counts()));
            (mixture_from_trajectories(trajectories)?, Some(counts))
        }
    };
    Ok((finish_pipeline(&pc, &heated)?, counts))
}

fn full_pipeline(config: &ExperimentConfig, record: &mut ResultRecord) -> Result<()> {
    let (out, counts) = run_pipeline(config)?;
    let pc = config.pipeline_config()?;
    let delta = pipeline_delta(&pc.encoding, &pc.heating);
    let sampled = matches!(pc.chsh_mode, ChshMode::Sampled { .. });
    let prov = if sampled {
        Provenance::Sampled
    } else {
        Provenance::Exact
    };
    record.result("delta", delta, Provenance::Analytic);
    record.result("B", out.bell.b, prov);
    if let Some(se) = out.bell.b_standard_error() {
        record.result("B_se", se, Provenance::Sampled);
    }
    record.result("B_analytic", chsh_analytic(delta), Provenance::Analytic);
    record.result(
        "phi_plus_fidelity",
        out.phi_plus_fidelity,
        Provenance::Exact,
    );
    record.result(
        "mixed_bell_fidelity",
        out.mixed_bell_fidelity,
        Provenance::Exact,
    );
    if let Some(c) = counts {
        let per = c.total() as f64 / config.noise.trajectories as f64;
        record.result("jumps_per_trajectory", per, Provenance::Sampled);
    }
    let mut table = Table::new(&["pair", "theta1", "theta2", "E", "SE"]);
    for (k, (t1, t2)) in pc.angles.pairs().into_iter().enumerate() {
        let se = out.bell.standard_errors.map_or(0.0, |s| s[k]);
        table.push(vec![
            Cell::Num(k as f64),
            t1.into(),
            t2.into(),
            out.bell.e[k].into(),
            se.into(),
        ]);
    }
    record.table = table;
    Ok(())
}
