//! One function per command; each returns the files to write.

use crate::{Classify, Ctx, Failure};
use hminimal::flow::{mollify, picard, straightness, PicardOptions};
use hminimal::graph::glue_check as glue;
use hminimal::plateau::{
    access_field, access_set, isolated_points, nonlegendrian_verdict, phi_continue as cont, spanning_assemble,
    ContinueOptions, PhiPath, PhiStatus, VerdictStatus,
};
use hminimal::ruled::{char_locus as locus, persistence_check, rule_crossing_scan, Mesh, RuledGraph};
use hminimal::schema::{CurveSpec, FlowSpec, GlueSpec, PatchSpec, PersistentSpec, RuledSpec};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write;

pub type Files = Vec<(String, String)>;

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).config()
}

fn pretty<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).internal()?;
    s.push('\n');
    Ok(s)
}

fn mesh_json(m: &Mesh) -> Value {
    json!({ "vertices": m.vertices, "faces": m.faces })
}

pub fn gauss_scan(ctx: &Ctx, text: &str) -> Result<Files, Failure> {
    let patch = parse::<PatchSpec>(text)?.build(ctx.tol).config()?;
    let n = ctx.grid.unwrap_or(41);
    let mut csv = String::from("x,y,p,q,mag,H,characteristic\n");
    for [x, y] in patch.grid(n) {
        let g = patch.horizontal_gauss(x, y).internal()?;
        // H is left blank where it is undefined or refused near characteristic points.
        let h = patch.h_curvature(x, y).map(|h| h.to_string()).unwrap_or_default();
        let _ = writeln!(csv, "{x},{y},{},{},{},{h},{}", g.p, g.q, g.mag, u8::from(g.is_characteristic()));
    }
    let points = patch.characteristic_scan(n);
    let summary = json!({ "grid": n, "characteristic_points": points });
    Ok(vec![("gauss_scan.csv".into(), csv), ("gauss_scan.json".into(), pretty(&summary)?)])
}

pub fn minimality(ctx: &Ctx, text: &str) -> Result<Files, Failure> {
    let patch = parse::<PatchSpec>(text)?.build(ctx.tol).config()?;
    let n = ctx.grid.unwrap_or(33);
    let report = patch.minimality_residual(n, ctx.tol.char_margin).internal()?;
    let energy = patch.energy(64).ok().map(|(e, err)| json!({ "value": e, "error_estimate": err }));
    let out = json!({ "grid": n, "report": report, "energy": energy });
    Ok(vec![("minimality.json".into(), pretty(&out)?)])
}

pub fn char_locus(ctx: &Ctx, text: &str) -> Result<Files, Failure> {
    let surface = parse::<RuledSpec>(text)?.build(ctx.tol).config()?;
    let n = ctx.grid.unwrap_or(201);
    let roots = locus(&surface, &surface.seed.s_grid(n)).internal()?;
    let crossings = rule_crossing_scan(&surface, n.min(401)).internal()?;
    let out = json!({ "grid": n, "locus": roots, "crossings": crossings });
    Ok(vec![("char_locus.json".into(), pretty(&out)?)])
}

pub fn build_ruled(ctx: &Ctx, text: &str) -> Result<Files, Failure> {
    let surface = parse::<RuledSpec>(text)?.build(ctx.tol).config()?;
    let seed = surface.seed.validate();
    let mesh = surface.mesh(48, 12).internal()?;
    let graph = match RuledGraph::new(surface.clone()) {
        Ok(g) => {
            let patch = g.into_patch().with_tol(ctx.tol);
            match patch.minimality_residual(ctx.grid.unwrap_or(21), ctx.tol.char_margin) {
                Ok(r) => json!({ "minimality": r }),
                Err(e) => json!({ "error": e.to_string() }),
            }
        }
        Err(e) => json!({ "error": e.to_string() }),
    };
    let out = json!({
        "seed": seed,
        "horizontal_thickness": surface.horizontal_thickness(),
        "graph": graph,
        "mesh": mesh_json(&mesh),
    });
    Ok(vec![("ruled.json".into(), pretty(&out)?), ("ruled.obj".into(), mesh.to_obj())])
}

pub fn glue_check(ctx: &Ctx, text: &str) -> Result<Files, Failure> {
    let (s1, s2, curve) = parse::<GlueSpec>(text)?.build(ctx.tol).config()?;
    let report = glue(&s1, &s2, &curve, ctx.grid.unwrap_or(201), 20).internal()?;
    Ok(vec![("glue.json".into(), pretty(&report)?)])
}

pub fn persistent(ctx: &Ctx, text: &str) -> Result<Files, Failure> {
    let spec = parse::<PersistentSpec>(text)?;
    let patch = spec.build(ctx.tol).config()?;
    let report = persistence_check(&patch, ctx.grid.unwrap_or(33)).internal()?;
    let out = json!({ "family": spec.family, "height": spec.family.expr_text(), "report": report });
    Ok(vec![("persistent.json".into(), pretty(&out)?)])
}

/// Root-scan resolution for the plateau commands.
const ROOT_GRID: usize = 1024;

pub fn plateau_scan(ctx: &Ctx, text: &str) -> Result<Files, Failure> {
    let curve = parse::<CurveSpec>(text)?.build(ctx.tol).config()?;
    let iso = isolated_points(&curve, ROOT_GRID).internal()?;
    let mut sets = Vec::new();
    for &th in &iso.legendrian {
        let roots = access_set(&curve, th, ROOT_GRID).internal()?;
        sets.push(json!({ "theta0": th, "roots": roots }));
    }
    let profile = (0..256)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / 256.0;
            curve.legendrian_defect(th).map(|w| [th, w])
        })
        .collect::<Result<Vec<_>, _>>()
        .internal()?;
    let field = access_field(&curve, ctx.grid.unwrap_or(128)).internal()?;
    let out = json!({
        "isolated_points": iso.points,
        "legendrian_points": iso.legendrian,
        "inconsistent": iso.inconsistent,
        "access_sets": sets,
        "legendrian_profile": profile,
        "access_field": { "n": field.n, "values": field.values },
    });
    Ok(vec![("plateau_scan.json".into(), pretty(&out)?)])
}

fn path_csv(p: &PhiPath) -> String {
    let mut s = String::from("t,phi,dphi,residual\n");
    for x in &p.samples {
        let _ = writeln!(s, "{},{},{},{}", x.t, x.phi, x.dphi, x.residual);
    }
    s
}

pub fn phi_continue(ctx: &Ctx, text: &str, t0: Option<f64>, phi0: Option<f64>, direction: f64) -> Result<Files, Failure> {
    let curve = parse::<CurveSpec>(text)?.build(ctx.tol).config()?;
    let (t0, phi0) = match (t0, phi0) {
        (Some(t), p) => (t, p.unwrap_or(t)),
        (None, Some(_)) => return Err(Failure::Config(anyhow::anyhow!("--phi0 needs --t0"))),
        (None, None) => {
            let iso = isolated_points(&curve, ROOT_GRID).internal()?;
            let t = *iso
                .points
                .first()
                .ok_or_else(|| Failure::Config(anyhow::anyhow!("curve has no isolated point; pass --t0 and --phi0")))?;
            (t, t)
        }
    };
    let opts = ContinueOptions { direction, ..Default::default() };
    let path = cont(&curve, t0, phi0, &opts).config()?;
    let out = json!({
        "t0": t0,
        "phi0": phi0,
        "direction": opts.direction,
        "status": path.status.name(),
        "t_star": match path.status { PhiStatus::Obstructed { t_star } => Some(t_star), _ => None },
        "detail": path.status,
        "end_t": path.end_t,
        "samples": path.samples,
    });
    Ok(vec![("phi_path.json".into(), pretty(&out)?), ("phi_path.csv".into(), path_csv(&path))])
}

pub fn assemble(ctx: &Ctx, text: &str, force: bool) -> Result<Files, Failure> {
    let curve = parse::<CurveSpec>(text)?.build(ctx.tol).config()?;
    let iso = isolated_points(&curve, ROOT_GRID).internal()?;
    let nl = nonlegendrian_verdict(&curve, 10_000).internal()?;
    let mut files = Vec::new();
    let verdict = match iso.points.first() {
        None => {
            let status = match nl.status {
                VerdictStatus::NoRuledSpanningGraph => "NO_RULED_SPANNING_GRAPH",
                VerdictStatus::Inconclusive => "INCONCLUSIVE",
            };
            json!({
                "status": status,
                "obstruction_t": null,
                "isolated_points": iso.points,
                "legendrian_min": nl.legendrian_min,
                "fold_report": null,
                "planar_window": nl.planar_window,
            })
        }
        Some(&t0) => {
            let opts = ContinueOptions { continue_past_obstruction: force, ..Default::default() };
            let path = cont(&curve, t0, t0, &opts).internal()?;
            let obstruction = path.obstructions.first().copied();
            let fold = if path.status == PhiStatus::Monotone || force {
                let a = spanning_assemble(&curve, &path, ctx.grid.unwrap_or(120), 9, force).internal()?;
                let body = json!({
                    "forced": a.forced,
                    "path_status": path.status.name(),
                    "rules": a.rules,
                    "mesh": mesh_json(&a.mesh),
                });
                files.push(("assembly.json".to_string(), pretty(&body)?));
                files.push(("assembly.obj".to_string(), a.mesh.to_obj()));
                Some(a.fold)
            } else {
                None
            };
            json!({
                "status": path.status.name(),
                "obstruction_t": obstruction,
                "isolated_points": iso.points,
                "legendrian_min": nl.legendrian_min,
                "fold_report": fold,
                "end_t": path.end_t,
                "forced": force,
            })
        }
    };
    files.insert(0, ("verdict.json".to_string(), pretty(&verdict)?));
    Ok(files)
}

pub fn flow_trace(ctx: &Ctx, text: &str) -> Result<Files, Failure> {
    let spec = parse::<FlowSpec>(text)?;
    let field = spec.build(ctx.tol).config()?;
    let opts = PicardOptions { t_max: spec.t_max, intervals: spec.intervals.unwrap_or(2048), ..Default::default() };
    let m = field.sup_norm();
    let smooth = spec
        .eps
        .iter()
        .map(|&e| mollify(&field, e))
        .collect::<Result<Vec<_>, _>>()
        .config()?;
    let mut files = Vec::new();
    let mut curves = Vec::new();
    for (k, &x0) in spec.starts.iter().enumerate() {
        let c = picard(&field, x0, &opts).config()?;
        let mut moll = Vec::new();
        for s in &smooth {
            let ck = match picard(&s.field, x0, &opts) {
                Ok(ck) => ck,
                Err(e) => {
                    moll.push(json!({ "eps": s.eps, "error": e.to_string() }));
                    continue;
                }
            };
            let n = c.pts.len().min(ck.pts.len());
            let dev = (0..n)
                .map(|i| (c.pts[i][0] - ck.pts[i][0]).hypot(c.pts[i][1] - ck.pts[i][1]))
                .fold(0.0, f64::max);
            let t_cover = if n > 0 { c.t[n - 1] } else { 0.0 };
            moll.push(json!({ "eps": s.eps, "m_k": s.m_k, "deviation": dev, "bound": s.m_k * t_cover }));
        }
        curves.push(json!({
            "start": x0,
            "iterations": c.iterations,
            "residual": c.residual,
            "converged": c.converged,
            "truncated": c.truncated,
            "straightness": straightness(&c.pts).ok(),
            "lipschitz_excess": c.lipschitz_excess(m),
            "mollified": moll,
            "csv": format!("flow_{k}.csv"),
        }));
        files.push((format!("flow_{k}.csv"), c.to_csv()));
    }
    let out = json!({ "sup_norm": m, "modulus_0.05": field.modulus(0.05), "curves": curves });
    files.insert(0, ("flow.json".to_string(), pretty(&out)?));
    Ok(files)
}
