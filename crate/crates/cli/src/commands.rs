use std::f64::consts::PI;

use serde_json::json;

use microswim::actuators::{
    reference_rod_array, rod_internal_power, treadmill_analysis, treadmill_internal_power, Duty, FrictionModel,
    TreadmillDesign, DEFAULT_FAILURE_STRENGTH,
};
use microswim::bem::oracle::{swim_oscillation_oracle_with, OracleOptions};
use microswim::bem::solver::{swim_dump_csv, SlipProfile};
use microswim::brownian::brownian_table;
use microswim::design::{feasibility_grid_with, log_space, ConstraintSet, FeasibilityGrid, Method, ReferenceDesigns};
use microswim::field::{shear_and_stress_with, MotionMode, PreparedFlow, ShearMeasure};
use microswim::shape::{b_grid, brownian_shape_sweep, constrained_shape, shape_sweep, GeometryConstraints, SweepOptions};
use microswim::squirmer::{
    normalize_spectrum, optimal_spectrum, oscillation_analysis, quasistatic_validity, spectrum_for_scenario, ModeSpectrum,
};
use microswim::tangential::{
    angular_velocity, band_performance, band_performance_quadrature, band_rotation_rate, required_band_speed, turn_time,
    BandActuation, BandProfile,
};
use microswim::{Error, PerformanceRecord, Result, Scenario};

use crate::args::*;
use crate::table::{Table, Value};

pub fn table1(s: &Scenario) -> Result<Table> {
    let mut t = Table::quantities();
    t.quantity("speed of sound", "c", "m/s", s.c);
    t.quantity("density", "rho", "kg/m^3", s.rho);
    t.quantity("ambient temperature", "T_body", "K", s.t_body);
    t.quantity("viscosity", "eta", "Pa s", s.eta);
    t.quantity("kinematic viscosity", "nu", "m^2/s", s.nu);
    t.quantity("radius", "a", "m", s.a);
    t.quantity("locomotion speed", "U", "m/s", s.u);
    t.quantity("Reynolds number", "Re", "-", s.reynolds());
    t.quantity("drag force", "F", "N", s.drag_force());
    t.quantity("drag power", "P_drag", "W", s.drag_power());
    Ok(t)
}

fn band_for(s: &Scenario, gamma: f64) -> Result<BandActuation> {
    BandActuation::meridional(gamma, required_band_speed(s.u, gamma)?)
}

pub fn table2(s: &Scenario, args: &BandArgs) -> Result<Table> {
    let gamma = args.gamma_deg.to_radians();
    let band = band_for(s, gamma)?;
    let closed = band_performance(&band, s)?;
    let quad = band_performance_quadrature(&band, s)?;
    let mut t = Table::new(["quantity", "symbol", "unit", "closed_form", "quadrature"]);
    let mut row = |name: &str, sym: &str, unit: &str, a: f64, b: f64| t.push(vec![name.into(), sym.into(), unit.into(), a.into(), b.into()]);
    row("band angle", "gamma", "rad", gamma, gamma);
    row("surface area fraction", "sin(gamma/2)", "-", (gamma / 2.0).sin(), (gamma / 2.0).sin());
    row("surface speed", "v", "m/s", band.v, band.v);
    row("locomotion speed", "U", "m/s", closed.speed, quad.speed);
    row("power", "P", "W", closed.propel_power, quad.propel_power);
    row("hydrodynamic efficiency", "e", "-", closed.efficiency, quad.efficiency);
    row("max thrust", "F", "N", closed.thrust, quad.thrust);
    Ok(t)
}

pub fn table3(s: &Scenario, args: &RotationArgs) -> Result<Table> {
    let gamma = args.gamma_deg.to_radians();
    let omega = band_rotation_rate(gamma, args.v, s.a);
    let band = BandActuation::new(gamma, args.v, BandProfile::CosPhiRotation)?;
    let w = angular_velocity(&band.field(), s.a)?;
    let mut t = Table::quantities();
    t.quantity("band angle", "gamma", "rad", gamma);
    t.quantity("surface area fraction", "sin(gamma/2)", "-", (gamma / 2.0).sin());
    t.quantity("max surface speed", "v", "m/s", args.v);
    t.quantity("angular velocity", "Omega", "rad/s", omega);
    t.quantity("angular velocity (quadrature)", "Omega_q", "rad/s", (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt());
    t.quantity("turn time", "t_turn", "s", turn_time(args.turn_deg.to_radians(), omega)?);
    Ok(t)
}

pub fn table4(s: &Scenario, args: &TreadmillArgs) -> Result<Table> {
    let band = band_for(s, args.gamma_deg.to_radians())?;
    let design = TreadmillDesign::default();
    let r = treadmill_analysis(&design, s.eta, band.v, args.wall_distance)?;
    let friction = FrictionModel::new(args.k_friction, Duty::Steady)?;
    let band_area = 4.0 * PI * s.a * s.a * (band.gamma / 2.0).sin();
    let mut t = Table::quantities();
    t.quantity("tread width", "W", "m", design.w);
    t.quantity("tread length exposed", "L", "m", design.l);
    t.quantity("tread thickness", "h", "m", design.h);
    t.quantity("Young's modulus", "E", "Pa", design.e);
    t.quantity("tread speed", "v", "m/s", band.v);
    t.quantity("bearing radius", "r", "m", design.r);
    t.quantity("rotation rate", "f", "Hz", r.rotation_frequency);
    t.quantity("angular velocity", "omega", "rad/s", r.angular_velocity);
    t.quantity("bend strain", "h/r", "-", r.bend_strain);
    t.quantity("bend stress", "hE/r", "Pa", r.bend_stress);
    t.quantity("wall distance", "d", "m", args.wall_distance);
    t.quantity("drag on tread", "F", "N", r.drag_force);
    t.quantity("tread tension", "F/(hW)", "Pa", r.tension);
    t.quantity("tension below failure strength", "-", "-", r.tension_ok(DEFAULT_FAILURE_STRENGTH));
    t.quantity("sliding area", "S", "m^2", design.sliding_area);
    t.quantity("sliding friction power", "P_friction", "W", treadmill_internal_power(&friction, band_area, band.v)?);
    Ok(t)
}

fn reference_spectrum(s: &Scenario, args: &SpectrumArgs) -> Result<ModeSpectrum> {
    Ok(spectrum_for_scenario(args.k, args.p, args.epsilon, s)?.0)
}

pub fn table4_osc(s: &Scenario, args: &SpectrumArgs) -> Result<Table> {
    let spec = reference_spectrum(s, args)?;
    let q = quasistatic_validity(s, spec.omega)?;
    let mut t = Table::quantities();
    t.quantity("oscillation frequency", "f", "Hz", spec.omega / (2.0 * PI));
    t.quantity("angular frequency", "omega", "rad/s", spec.omega);
    t.quantity("viscous damping length", "delta", "m", q.delta);
    t.quantity("Womersley number", "Wo", "-", q.womersley);
    Ok(t)
}

pub fn table5(s: &Scenario, args: &SpectrumArgs) -> Result<Table> {
    let spec = reference_spectrum(s, args)?;
    let report = oscillation_analysis(&spec, s)?;
    let rec = report.record;
    let c = report.coefficients;
    let rods = reference_rod_array(args.k + args.p, s.a)?;
    let friction = FrictionModel::new(args.k_friction, Duty::Sinusoidal)?;
    let peak = s.a * spec.epsilon * spec.omega;
    let mut t = Table::quantities();
    t.quantity("max surface displacement", "a eps", "m", s.a * spec.epsilon);
    t.quantity("max surface speed", "a eps omega", "m/s", peak);
    t.quantity("locomotion speed", "U", "m/s", rec.speed);
    t.quantity("power", "P", "W", rec.propel_power);
    t.quantity("hydrodynamic efficiency", "e", "-", rec.efficiency);
    t.quantity("max thrust", "F", "N", rec.thrust);
    t.quantity("speed coefficient", "C_U", "-", c.c_u);
    t.quantity("power coefficient", "C_P", "-", c.c_p);
    t.quantity("efficiency coefficient", "C_eff", "-", c.c_eff);
    t.quantity("thrust coefficient", "C_T", "-", c.c_t);
    t.quantity("rod count", "N_rods", "-", rods.rod_count);
    t.quantity("rod sliding area", "S", "m^2", rods.sliding_area);
    t.quantity("rod friction power", "P_friction", "W", rod_internal_power(&friction, &rods, peak)?);
    Ok(t)
}

pub fn table6(s: &Scenario, args: &Table6Args) -> Result<Table> {
    let row = brownian_table(s, args.travel)?;
    let mut t = Table::quantities();
    t.quantity("translational diffusion coefficient", "D", "m^2/s", row.d);
    t.quantity("rms displacement over travel", "sqrt(6 D d/U)", "m", row.rms_displacement);
    t.quantity("orientation time constant", "tau", "s", row.tau);
    t.quantity("travel during orientation time", "U tau", "m", row.travel_in_tau);
    t.quantity("motile diffusion coefficient", "D_m", "m^2/s", row.d_m);
    Ok(t)
}

fn record_row(t: &mut Table, r: &PerformanceRecord) {
    t.quantity("locomotion speed", "U", "m/s", r.speed);
    t.quantity("propulsion power", "P_propel", "W", r.propel_power);
    t.quantity("internal power", "P_internal", "W", r.internal_power);
    t.quantity("hydrodynamic efficiency", "e", "-", r.efficiency);
    t.quantity("thrust", "F", "N", r.thrust);
}

pub fn tangential(s: &Scenario, args: &TangentialArgs) -> Result<Table> {
    let gamma = args.gamma_deg.to_radians();
    let band = match args.v {
        Some(v) => BandActuation::meridional(gamma, v)?,
        None => band_for(s, gamma)?,
    };
    let rec = if args.quadrature { band_performance_quadrature(&band, s)? } else { band_performance(&band, s)? };
    let area = 4.0 * PI * s.a * s.a * (gamma / 2.0).sin();
    let rec = rec.with_internal_power(treadmill_internal_power(&FrictionModel::steady(), area, band.v)?);
    let mut t = Table::quantities();
    t.quantity("band angle", "gamma", "rad", gamma);
    t.quantity("surface speed", "v", "m/s", band.v);
    record_row(&mut t, &rec);
    Ok(t)
}

pub fn oscillation(s: &Scenario, args: &OscillationArgs) -> Result<Table> {
    let base = match &args.spectrum_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config { line: 0, reason: format!("{}: {e}", path.display()) })?;
            ModeSpectrum::from_json(&text)?
        }
        None => optimal_spectrum(args.spectrum.k, args.spectrum.p)?,
    };
    let norm = normalize_spectrum(&base, s.a)?;
    let c = microswim::squirmer::oscillation_coefficients(&norm)?;
    let eps = args.spectrum.epsilon;
    let spec = norm.with_scale(eps, c.omega_for_speed(s.u, s.a, eps)?);
    let report = oscillation_analysis(&spec, s)?;
    let mut t = Table::quantities();
    t.quantity("amplitude scale", "eps", "-", eps);
    t.quantity("angular frequency", "omega", "rad/s", spec.omega);
    t.quantity("Womersley number", "Wo", "-", report.validity.womersley);
    record_row(&mut t, &report.record);
    t.quantity("speed coefficient", "C_U", "-", c.c_u);
    t.quantity("power coefficient", "C_P", "-", c.c_p);
    t.quantity("efficiency coefficient", "C_eff", "-", c.c_eff);
    t.quantity("thrust coefficient", "C_T", "-", c.c_t);
    if args.oracle {
        let opts = OracleOptions { elements: args.elements, steps_per_period: args.steps };
        let run = swim_oscillation_oracle_with(&spec, s.a, s, args.periods, opts)?;
        t.quantity("oracle locomotion speed", "U_bem", "m/s", run.mean_speed);
        t.quantity("oracle speed coefficient", "C_U_bem", "-", run.mean_speed / (s.a * eps * eps * spec.omega));
    }
    if !report.warnings.is_empty() {
        t.summary = Some(json!({ "warnings": report.warnings }));
    }
    Ok(t)
}

pub fn fieldscan(s: &Scenario, args: &FieldArgs) -> Result<Table> {
    let gamma = PI / 3.0;
    let modes = [
        MotionMode::Dragged { scenario: s.clone() },
        MotionMode::TangentialBand { scenario: s.clone(), band: band_for(s, gamma)? },
        MotionMode::Oscillating { scenario: s.clone(), spectrum: spectrum_for_scenario(10, 10, 0.05, s)?.0 },
    ];
    let flows: Vec<PreparedFlow> = modes.iter().map(PreparedFlow::new).collect::<Result<_>>()?;
    let measure = if args.strain_rate { ShearMeasure::StrainRate } else { ShearMeasure::Envelope };
    let labels = ["dragged", "tangential", "oscillating"];
    let mut cols = vec!["d [m]".to_string(), "d/a".to_string()];
    for q in ["speed [m/s]", "shear [1/s]", "stress [Pa]"] {
        let (name, unit) = q.split_once(' ').unwrap();
        cols.extend(labels.iter().map(|l| format!("{name}_{l} {unit}")));
    }
    let mut t = Table::new(cols);
    for d_rel in log_space(args.d_min, args.d_max, args.points)? {
        let d = d_rel * s.a;
        let speeds: Vec<f64> = flows.iter().map(|f| f.max_speed(d)).collect::<Result<_>>()?;
        let ss: Vec<_> = flows.iter().map(|f| shear_and_stress_with(f, d, s.eta, measure)).collect::<Result<_>>()?;
        let mut row: Vec<Value> = vec![d.into(), d_rel.into()];
        row.extend(speeds.iter().map(|&x| Value::from(x)));
        row.extend(ss.iter().map(|x| Value::from(x.shear_rate)));
        row.extend(ss.iter().map(|x| Value::from(x.stress)));
        t.push(row);
    }
    Ok(t)
}

pub fn shape_sweep_table(s: &Scenario, args: &ShapeArgs) -> Result<Table> {
    let c = GeometryConstraints::default();
    let opts = SweepOptions { elements: args.elements, friction: FrictionModel::new(args.k_friction, Duty::Steady)? };
    let sweep = shape_sweep(&b_grid(args.b_min, args.b_max, args.points), s, &c, &opts)?;
    if let Some(path) = &args.bem_dump {
        let d = constrained_shape(c.sphere_radius()?, &c)?;
        let slip = SlipProfile::Band { t1: d.band_t1, t2: PI - d.band_t1, v: sweep.sphere.v };
        crate::write_atomic(path, &swim_dump_csv(&d.shape, &slip, s.eta, args.elements)?)
            .map_err(|e| Error::Config { line: 0, reason: format!("{}: {e}", path.display()) })?;
    }
    let mut t = Table::new([
        "b [m]",
        "a [m]",
        "v_rel",
        "P_propel_rel",
        "P_total_rel",
        "P_internal_rel",
        "S_p [m^2]",
        "v [m/s]",
        "P_propel [W]",
        "P_internal [W]",
    ]);
    for e in &sweep.entries {
        let d = &e.design;
        t.push(vec![
            d.shape.b.into(),
            d.shape.a.into(),
            e.v_rel.into(),
            e.p_propel_rel.into(),
            e.p_total_rel.into(),
            e.p_internal_rel.into(),
            d.s_p.into(),
            d.v.into(),
            d.p_propel.into(),
            d.p_internal.into(),
        ]);
    }
    Ok(t)
}

pub fn brownian_sweep_table(s: &Scenario, args: &NavArgs) -> Result<Table> {
    let c = GeometryConstraints::default();
    let alpha = args.alpha_deg.to_radians();
    let out = brownian_shape_sweep(&b_grid(args.b_min, args.b_max, args.points), &c, args.distance, alpha, s.eta, s.t_body)?;
    let mut t = Table::new(["b [m]", "a [m]", "U_required [m/s]", "tau [s]"]);
    for e in &out {
        t.push(vec![e.shape.b.into(), e.shape.a.into(), e.u_required.into(), e.tau.into()]);
    }
    Ok(t)
}

fn grid_summary(g: &FeasibilityGrid) -> serde_json::Value {
    let all = g.cells.iter().filter(|c| c.all_pass()).count();
    let invalid = g.cells.iter().filter(|c| !c.model_valid).count();
    let noticeable = g.cells.iter().filter(|c| c.all_pass() && c.internal_fraction() > 0.1).count();
    let columns: Vec<_> = g
        .eta
        .iter()
        .enumerate()
        .map(|(ie, &eta)| {
            let ok: Vec<f64> = (0..g.u.len()).map(|iu| g.cell(iu, ie)).filter(|c| c.all_pass()).map(|c| c.u).collect();
            match (ok.first(), ok.last()) {
                (Some(lo), Some(hi)) => json!({ "eta": eta, "u_min": lo, "u_max": hi }),
                _ => json!({ "eta": eta, "u_min": null, "u_max": null }),
            }
        })
        .collect();
    json!({
        "method": g.method.label(),
        "cells": g.cells.len(),
        "all_pass": all,
        "model_invalid": invalid,
        "internal_over_10_percent": noticeable,
        "feasible_speeds": columns,
    })
}

pub fn tradeoff(s: &Scenario, args: &GridArgs) -> Result<Table> {
    let constraints = ConstraintSet { p_max: args.p_max, stress_max: args.stress_max, ..ConstraintSet::default() };
    let refs = ReferenceDesigns::new(s, &constraints)?;
    let us = log_space(args.u_min, args.u_max, args.points_u)?;
    let es = log_space(args.eta_min, args.eta_max, args.points_eta)?;
    let methods: &[Method] = match args.method {
        MethodArg::Both => &[Method::Tangential, Method::Oscillating],
        MethodArg::Tangential => &[Method::Tangential],
        MethodArg::Oscillating => &[Method::Oscillating],
    };
    let mut t = Table::new([
        "U [m/s]",
        "eta [Pa s]",
        "method",
        "pass_power",
        "pass_stress",
        "pass_brownian",
        "margin_power",
        "margin_stress",
        "margin_brownian",
        "P_propel [W]",
        "P_internal [W]",
        "internal_fraction",
        "womersley",
        "model_valid",
        "in_range",
    ]);
    let mut summaries = Vec::new();
    for &m in methods {
        let g = feasibility_grid_with(&refs, &us, &es, m)?;
        for c in &g.cells {
            t.push(vec![
                c.u.into(),
                c.eta.into(),
                m.label().into(),
                c.pass.power.into(),
                c.pass.stress.into(),
                c.pass.brownian.into(),
                c.margins.power.into(),
                c.margins.stress.into(),
                c.margins.brownian.into(),
                c.p_propel.into(),
                c.p_internal.into(),
                c.internal_fraction().into(),
                c.womersley.into(),
                c.model_valid.into(),
                c.in_range.into(),
            ]);
        }
        summaries.push(grid_summary(&g));
    }
    t.summary = Some(json!({ "regions": summaries }));
    Ok(t)
}
