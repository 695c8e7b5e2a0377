//! Subcommand implementations: resolve settings, run the library, emit
//! files. Data files never carry run-specific values; those go to
//! run_meta.json so identical configs produce byte-identical data.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use qmlab::bound;
use qmlab::energetics;
use qmlab::momentum;
use qmlab::tdse::{self, PropagationRun};
use qmlab::{born, units, verify, Grid, Potential};
use serde_json::json;

use crate::config::Settings;
use crate::output::{atomic_write, csv, fmt, write_json};
use crate::{
    CliError, Ctx, DecomposeArgs, EnergeticsArgs, PropagateArgs, ScatterArgs, SolveArgs,
};

fn usage(e: qmlab::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn run_err(e: qmlab::Error) -> CliError {
    CliError::Run(e.to_string())
}

fn write_meta(
    ctx: &Ctx,
    command: &str,
    parameters: BTreeMap<String, String>,
    warnings: Vec<String>,
) -> Result<(), CliError> {
    let meta = json!({
        "schema": 1,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "units": if ctx.lab { "lab" } else { "au" },
        "parameters": parameters,
        "warnings": warnings,
    });
    write_json(&ctx.out_dir, "run_meta.json", &meta)?;
    Ok(())
}

struct ResolvedPotential {
    pot: Potential,
    kind: String,
}

fn resolve_potential(
    settings: &mut Settings,
    kind: Option<String>,
    strength: Option<f64>,
    screening: Option<f64>,
    omega: Option<f64>,
    table: Option<PathBuf>,
) -> Result<ResolvedPotential, CliError> {
    let kind = settings.take("potential", kind, "coulomb".to_string())?;
    let strength = settings.take("strength", strength, 1.0)?;
    let screening = settings.take("screening", screening, 1.0)?;
    let omega = settings.take("omega", omega, 1.0)?;
    let table = settings.take_opt("table", table.map(|p| p.display().to_string()))?;
    let pot = match kind.as_str() {
        "coulomb" => Potential::coulomb(strength).map_err(usage)?,
        "yukawa" => Potential::yukawa(strength, screening).map_err(usage)?,
        "harmonic" => Potential::harmonic(omega).map_err(usage)?,
        "tabulated" => {
            let path = table
                .as_deref()
                .ok_or_else(|| CliError::Usage("tabulated potential needs --table".into()))?;
            Potential::tabulated_from_file(path).map_err(usage)?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown potential '{other}' (coulomb, yukawa, harmonic, tabulated)"
            )))
        }
    };
    Ok(ResolvedPotential { pot, kind })
}

fn resolve_radial_grid(
    settings: &mut Settings,
    r_max: Option<f64>,
    n: Option<usize>,
) -> Result<Grid, CliError> {
    let r_max = settings.take("r_max", r_max, 40.0)?;
    let n = settings.take("n", n, 4000)?;
    Grid::radial(r_max, n).map_err(usage)
}

pub fn solve(args: SolveArgs, mut settings: Settings, ctx: &Ctx) -> Result<u8, CliError> {
    let resolved = resolve_potential(
        &mut settings,
        args.potential,
        args.strength,
        args.screening,
        args.omega,
        args.table,
    )?;
    let grid = resolve_radial_grid(&mut settings, args.r_max, args.n)?;
    let l = settings.take("l", args.l, 0u32)?;
    let count = settings.take("count", args.count, 1usize)?;
    let parameters = settings.finish()?;

    let states = bound::solve_radial(&resolved.pot, l, count, &grid).map_err(run_err)?;
    let entries: Vec<serde_json::Value> = states
        .iter()
        .map(|s| {
            json!({
                "index": s.index,
                "energy": s.energy,
                "energy_ev": units::hartree_to_ev(s.energy).unwrap_or(f64::NAN),
                "method": s.method.name(),
                "residual_sup": s.residual_sup,
            })
        })
        .collect();
    let report = json!({
        "schema": 1,
        "potential": resolved.kind,
        "grid": { "kind": "radial", "r_max": grid.stop(), "n": grid.n() },
        "angular_momentum": l,
        "states": entries,
    });
    write_json(&ctx.out_dir, "solve.json", &report)?;
    write_meta(ctx, "solve", parameters, Vec::new())?;
    Ok(0)
}

pub fn decompose(args: DecomposeArgs, mut settings: Settings, ctx: &Ctx) -> Result<u8, CliError> {
    let resolved = resolve_potential(
        &mut settings,
        args.potential,
        args.strength,
        args.screening,
        args.omega,
        args.table,
    )?;
    let grid = resolve_radial_grid(&mut settings, args.r_max, args.n)?;
    let p_max = settings.take("p_max", args.p_max, 20.0)?;
    let p_bins = settings.take("p_bins", args.p_bins, 2000usize)?;
    let parameters = settings.finish()?;

    let states = bound::solve_radial(&resolved.pot, 0, 1, &grid).map_err(run_err)?;
    let p_grid = Grid::radial(p_max, p_bins).map_err(usage)?;
    let amp = momentum::decompose_onto(&states[0].psi, &p_grid).map_err(run_err)?;

    let mut header = vec!["p", "a", "a_sq_times_4pi_p2"];
    if ctx.lab {
        header.push("p_per_m");
    }
    let mut rows = Vec::with_capacity(amp.values.len() + 1);
    let mut push_row = |p: f64, a: f64| {
        let mut row = vec![fmt(p), fmt(a), fmt(4.0 * PI * p * p * a * a)];
        if ctx.lab {
            row.push(fmt(p / units::BOHR_IN_M));
        }
        rows.push(row);
    };
    push_row(0.0, amp.at_zero);
    for (j, &p) in amp.p_grid.nodes().iter().enumerate() {
        push_row(p, amp.values[j]);
    }
    atomic_write(&ctx.out_dir, "momentum.csv", &csv(&header, &rows))?;

    let mut warnings = Vec::new();
    if amp.truncation_warning {
        let w = "momentum window truncates the amplitude tail; raise p_max".to_string();
        eprintln!("warning: {w}");
        warnings.push(w);
    }
    write_meta(ctx, "decompose", parameters, warnings)?;
    Ok(0)
}

pub fn energetics_cmd(
    args: EnergeticsArgs,
    mut settings: Settings,
    ctx: &Ctx,
) -> Result<u8, CliError> {
    let resolved = resolve_potential(
        &mut settings,
        args.potential,
        args.strength,
        args.screening,
        args.omega,
        args.table,
    )?;
    let grid = resolve_radial_grid(&mut settings, args.r_max, args.n)?;
    let parameters = settings.finish()?;

    let states = bound::solve_radial(&resolved.pot, 0, 1, &grid).map_err(run_err)?;
    let dens = energetics::energy_densities(&states[0].psi, &resolved.pot).map_err(run_err)?;

    let mut header = vec!["r", "psi2", "KE", "C", "PE", "E"];
    if ctx.lab {
        header.extend(["r_m", "KE_ev", "C_ev", "PE_ev", "E_ev"]);
    }
    let ev = units::HARTREE_IN_EV;
    let rows: Vec<Vec<String>> = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut row = vec![
                fmt(r),
                fmt(dens.density[i]),
                fmt(dens.ke[i]),
                fmt(dens.c[i]),
                fmt(dens.pe[i]),
                fmt(dens.e_field[i]),
            ];
            if ctx.lab {
                row.push(fmt(r * units::BOHR_IN_M));
                row.push(fmt(dens.ke[i] * ev));
                row.push(fmt(dens.c[i] * ev));
                row.push(fmt(dens.pe[i] * ev));
                row.push(fmt(dens.e_field[i] * ev));
            }
            row
        })
        .collect();
    atomic_write(&ctx.out_dir, "energetics.csv", &csv(&header, &rows))?;

    let virial = energetics::virial_report(&dens);
    let crossing = energetics::crossing_radius(&dens).ok();
    let summary = json!({
        "schema": 1,
        "potential": resolved.kind,
        "energy": states[0].energy,
        "ke_total": dens.ke_total,
        "c_total": dens.c_total,
        "pe_total": dens.pe_total,
        "e_total": dens.e_total,
        "surface_equivalent": dens.surface_equivalent,
        "crossing_radius": crossing,
        "virial_at_radius": virial.at_radius,
        "virial": virial.checks.iter().map(|c| json!({
            "name": c.name,
            "lhs": c.lhs,
            "rhs": c.rhs,
            "deviation": c.deviation,
        })).collect::<Vec<_>>(),
    });
    write_json(&ctx.out_dir, "energetics.json", &summary)?;
    write_meta(ctx, "energetics", parameters, Vec::new())?;
    Ok(0)
}

pub fn scatter(args: ScatterArgs, mut settings: Settings, ctx: &Ctx) -> Result<u8, CliError> {
    let strength = settings.take("strength", args.strength, 1.0)?;
    let mu = settings.take("mu", args.mu, 1.0)?;
    let p = settings.take("p", args.p, 1.0)?;
    let theta_deg = settings.take_opt("theta", args.theta)?;
    let parameters = settings.finish()?;

    let pot = Potential::yukawa(strength, mu).map_err(usage)?;
    let thetas: Vec<f64> = match theta_deg {
        Some(t) => vec![t],
        None => (1..=36).map(|i| 5.0 * i as f64).collect(),
    };

    let mut header = vec!["theta_deg", "q", "f", "dcs"];
    if ctx.lab {
        header.extend(["f_m", "dcs_m2"]);
    }
    let mut rows = Vec::with_capacity(thetas.len());
    for t in thetas {
        let rad = t * PI / 180.0;
        let transfer = born::MomentumTransfer::from_kinematics(p, rad).map_err(usage)?;
        let res = born::born_amplitude(&pot, p, rad).map_err(run_err)?;
        let mut row = vec![fmt(t), fmt(transfer.q), fmt(res.amplitude), fmt(res.dcs)];
        if ctx.lab {
            let b = units::BOHR_IN_M;
            row.push(fmt(res.amplitude * b));
            row.push(fmt(res.dcs * b * b));
        }
        rows.push(row);
    }
    atomic_write(&ctx.out_dir, "scattering.csv", &csv(&header, &rows))?;
    write_meta(ctx, "scatter", parameters, Vec::new())?;
    Ok(0)
}

pub fn propagate(args: PropagateArgs, mut settings: Settings, ctx: &Ctx) -> Result<u8, CliError> {
    let kind = settings.take("potential", args.potential, "softcore-barrier".to_string())?;
    let omega = settings.take("omega", args.omega, 1.0)?;
    let table = settings.take_opt("table", args.table.map(|p| p.display().to_string()))?;
    let x_min = settings.take("x_min", args.x_min, -80.0)?;
    let x_max = settings.take("x_max", args.x_max, 79.9609375)?;
    let nodes = settings.take("nodes", args.nodes, 4096usize)?;
    let x0 = settings.take("x0", args.x0, -35.0)?;
    let sigma = settings.take("sigma", args.sigma, 3.0)?;
    let p0 = settings.take("p0", args.p0, 2.0)?;
    let dt = settings.take("dt", args.dt, 0.005)?;
    let steps = settings.take("steps", args.steps, 7000usize)?;
    let stride = settings.take("stride", args.stride, 200usize)?;
    let mask = settings.take("mask", args.mask, true)?;
    let parameters = settings.finish()?;

    let grid = Grid::uniform(x_min, x_max, nodes).map_err(usage)?;
    let pot = match kind.as_str() {
        "free" => {
            Potential::tabulated(vec![(x_min - 1.0, 0.0), (x_max + 1.0, 0.0)]).map_err(usage)?
        }
        "softcore-barrier" => {
            let table: Vec<(f64, f64)> = grid
                .nodes()
                .iter()
                .map(|&x| {
                    let s = (x * x + 1.0).sqrt();
                    (x, (-s).exp() / s)
                })
                .collect();
            Potential::tabulated(table).map_err(usage)?
        }
        "harmonic" => Potential::harmonic(omega).map_err(usage)?,
        "tabulated" => {
            let path = table
                .as_deref()
                .ok_or_else(|| CliError::Usage("tabulated potential needs --table".into()))?;
            Potential::tabulated_from_file(path).map_err(usage)?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown potential '{other}' (free, softcore-barrier, harmonic, tabulated)"
            )))
        }
    };

    let psi0 = tdse::gaussian_packet(&grid, x0, sigma, p0).map_err(usage)?;
    let run = PropagationRun::new(psi0, pot, dt, steps)
        .map_err(usage)?
        .with_stride(stride)
        .with_mask(mask);
    let mut warnings = Vec::new();
    if run.stability_warning {
        let w = format!("dt*max|V| >= 0.5 at dt = {dt}; splitting accuracy degrades");
        eprintln!("warning: {w}");
        warnings.push(w);
    }
    let done = tdse::propagate(run).map_err(run_err)?;
    let ledger = tdse::scattering_energy_audit(&done).map_err(run_err)?;

    let mut header = vec!["t", "norm", "KE", "PE", "E"];
    if ctx.lab {
        header.extend(["KE_ev", "PE_ev", "E_ev"]);
    }
    let ev = units::HARTREE_IN_EV;
    let rows: Vec<Vec<String>> = ledger
        .rows
        .iter()
        .map(|r| {
            let mut row =
                vec![fmt(r.time), fmt(r.norm), fmt(r.kinetic), fmt(r.potential), fmt(r.energy)];
            if ctx.lab {
                row.push(fmt(r.kinetic * ev));
                row.push(fmt(r.potential * ev));
                row.push(fmt(r.energy * ev));
            }
            row
        })
        .collect();
    atomic_write(&ctx.out_dir, "ledger.csv", &csv(&header, &rows))?;

    let mut snap_rows = Vec::new();
    for s in &done.snapshots {
        for (i, v) in s.psi.values().iter().enumerate() {
            snap_rows.push(vec![fmt(s.time), i.to_string(), fmt(v.re), fmt(v.im)]);
        }
    }
    atomic_write(&ctx.out_dir, "snapshots.csv", &csv(&["t", "node", "re_psi", "im_psi"], &snap_rows))?;
    write_meta(ctx, "propagate", parameters, warnings)?;
    Ok(0)
}

pub fn verify_cmd(settings: Settings, ctx: &Ctx) -> Result<u8, CliError> {
    let parameters = settings.finish()?;
    let report = verify::run_acceptance().map_err(run_err)?;
    for check in &report.checks {
        println!(
            "{} criterion {:2} | {:<52} | expected {:>13.6e} tol {:>9.3e} got {:>13.6e}",
            if check.pass { "PASS" } else { "FAIL" },
            check.criterion,
            check.name,
            check.expected,
            check.tol,
            check.computed,
        );
    }
    let verdict = json!({
        "schema": 1,
        "pass": report.pass,
        "checks": report.checks.iter().map(|c| json!({
            "criterion": c.criterion,
            "name": c.name,
            "anchor": c.anchor,
            "expected": c.expected,
            "computed": c.computed,
            "tol": c.tol,
            "pass": c.pass,
        })).collect::<Vec<_>>(),
    });
    write_json(&ctx.out_dir, "verdict.json", &verdict)?;
    write_meta(ctx, "verify", parameters, Vec::new())?;
    if report.pass {
        println!("all {} checks pass", report.checks.len());
        Ok(0)
    } else {
        let failed = report.checks.iter().filter(|c| !c.pass).count();
        eprintln!("{failed} of {} checks failed", report.checks.len());
        Ok(1)
    }
}
