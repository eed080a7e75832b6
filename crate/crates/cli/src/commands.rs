use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use clap::ValueEnum;
use serde_json::{json, Map, Value};
use superosc_kg::bargmann::{fn_derivative_integral_rep, fn_integral_rep, sb_inverse, PlaneQuadrature, XiFunction};
use superosc_kg::field::{presets, Grid1d, SolutionField};
use superosc_kg::kg_spectral::{evolve_homogeneous, theta, CausalQuadrature};
use superosc_kg::special::PI_POW_NEG_QUARTER;
use superosc_kg::stochastic::{cov_kernel, gram_eigenvalues, CovKernelParams};
use superosc_kg::superosc::{coefficients, eval_fn_derivative, eval_fn_product, frequency};
use superosc_kg::verify::{run_suite, CheckId, SuiteOptions};
use superosc_kg::{InitialData, KgEvolution, KgProblem, SourceCase, SuperoscillationParams};

use crate::config::{FileConfig, Resolver};
use crate::{BargmannArgs, Case, CliError, CoeffsArgs, EvolveArgs, Format, KernelArgs, Preset, SourceArg, Table, VerifyArgs};

/// Largest `n` accepted by `bargmann` without `--allow-large-n`.
const BARGMANN_MAX_N: u32 = 12;

type Meta = Vec<(String, String)>;

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_table(out: &mut dyn Write, meta: &Meta, header: &str, rows: &[Vec<String>]) -> io::Result<()> {
    for (k, v) in meta {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "{header}")?;
    for r in rows {
        writeln!(out, "{}", r.join(","))?;
    }
    out.flush()
}

fn write_json(out: &mut dyn Write, value: &Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn meta_json(meta: &Meta) -> Value {
    Value::Object(meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect::<Map<_, _>>())
}

fn grid(r: &Resolver, flag: Option<String>, key: &str, default: &str) -> Result<Grid1d, CliError> {
    let s = r.get(flag, key)?.unwrap_or_else(|| default.to_string());
    s.parse::<Grid1d>().map_err(|e| CliError::Config(format!("--{key} {s}: {e}")))
}

fn nonneg_grid(r: &Resolver, flag: Option<String>, key: &str, default: &str) -> Result<Grid1d, CliError> {
    let g = grid(r, flag, key, default)?;
    if g.min < 0.0 {
        return Err(CliError::Config(format!("--{key} must not contain negative values")));
    }
    Ok(g)
}

fn source_case(s: SourceArg) -> SourceCase {
    match s {
        SourceArg::Zero => SourceCase::Zero,
        SourceArg::DiracSpace => SourceCase::DiracSpace,
        SourceArg::DiracSpacetime => SourceCase::DiracSpaceTime,
    }
}

pub fn evolve(args: EvolveArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    file.check_keys(&[
        "n", "a", "b", "m", "case", "source", "x", "t", "preset", "a-list", "panels-per-unit", "order", "out",
        "format",
    ])?;
    let r = Resolver { file: &file };
    let preset = r.get_enum(args.preset, "preset")?;
    let (dm, dx, dt) = match preset {
        Some(Preset::Figure1) => (presets::FIGURE1_M, presets::FIGURE1_X.to_string(), "0".to_string()),
        Some(Preset::Figure2) => (
            presets::FIGURE2_M,
            presets::FIGURE2_X.to_string(),
            presets::FIGURE2_T.to_string(),
        ),
        None => (3.0, "-5:5:201".to_string(), "0:2:21".to_string()),
    };
    let n_str = r.get(args.n, "n")?.unwrap_or_else(|| "10".to_string());
    let n: Option<u32> = match n_str.as_str() {
        "inf" => None,
        s => Some(s.parse().map_err(|_| CliError::Config(format!("--n {s}: expected a positive integer or `inf`")))?),
    };
    let m = r.get(args.m, "m")?.unwrap_or(dm);
    let case = r.get_enum(args.case, "case")?.unwrap_or(Case::P1);
    let source = source_case(r.get_enum(args.source, "source")?.unwrap_or(SourceArg::Zero));
    let b = r.get(args.b, "b")?;
    let a = r.get(args.a, "a")?;
    let a_list = r.get_list(args.a_list, "a-list")?;
    let x = grid(&r, args.x, "x", &dx)?;
    let t = nonneg_grid(&r, args.t, "t", &dt)?;
    let format = r.get_enum(args.common.format, "format")?.unwrap_or(Format::Csv);
    let out: Option<PathBuf> = r.get(args.common.out, "out")?;
    let ppu = r.get(args.panels_per_unit, "panels-per-unit")?;
    let order = r.get(args.order, "order")?;

    let a_values: Vec<f64> = match (preset, a_list) {
        (Some(Preset::Figure1), Some(list)) => {
            if a.is_some() {
                return Err(CliError::Config("give either --a or --a-list, not both".into()));
            }
            list
        }
        (Some(Preset::Figure1), None) => a.map_or_else(|| presets::FIGURE1_A.to_vec(), |a| vec![a]),
        (_, Some(_)) => return Err(CliError::Config("--a-list applies to --preset figure1 only".into())),
        (Some(Preset::Figure2), None) => vec![a.unwrap_or(presets::FIGURE2_A)],
        (None, None) => vec![a.unwrap_or(1.5)],
    };
    if a_values.is_empty() {
        return Err(CliError::Config("empty --a-list".into()));
    }
    match (case, b) {
        (Case::P1, Some(_)) => return Err(CliError::Config("--b applies to --case p2 only".into())),
        (Case::P2, None) => return Err(CliError::Config("--case p2 needs --b".into())),
        _ => {}
    }
    let quad = CausalQuadrature::new(ppu.unwrap_or(16), order.unwrap_or(10))?;

    let mut extra: Meta = vec![kv("x", x), kv("t", t)];
    if let Some(p) = preset {
        extra.push(kv("preset", p.to_possible_value().expect("named").get_name()));
    }
    if let Some(v) = ppu {
        extra.push(kv("panels-per-unit", v));
    }
    if let Some(v) = order {
        extra.push(kv("order", v));
    }

    let (xs, ts) = (x.points(), t.points());
    let mut fields = Vec::new();
    for &a in &a_values {
        let initial = match case {
            Case::P1 => InitialData::ProblemOne { a },
            Case::P2 => InitialData::ProblemTwo { a, b: b.expect("checked") },
        };
        let problem = KgProblem::new(m, initial, source)?;
        let field = match n {
            Some(n) => SolutionField::evaluate(&KgEvolution::new(n, problem)?.with_quadrature(quad.clone()), &xs, &ts),
            // the limit ignores the coefficients, any valid n will do
            None => SolutionField::evaluate_limit(&KgEvolution::new(1, problem)?.with_quadrature(quad.clone()), &xs, &ts),
        };
        fields.push((a, field));
    }

    let ext = match format {
        Format::Csv => "csv",
        Format::Report => "json",
    };
    let many = fields.len() > 1;
    for (a, field) in &fields {
        let path = match (&out, many) {
            (Some(dir), true) => Some(dir.join(format!("figure1_a{a}.{ext}"))),
            (p, _) => p.clone(),
        };
        let mut w = open_out(path.as_deref())?;
        match format {
            Format::Csv => field.write_csv(&mut w, &extra)?,
            Format::Report => {
                let mut meta = field.metadata();
                meta.extend(extra.iter().cloned());
                let rows: Vec<[f64; 4]> = field
                    .rows()
                    .flat_map(|(t, row)| field.x.iter().zip(row).map(move |(&x, v)| [x, t, v.re, v.im]))
                    .collect();
                write_json(&mut w, &json!({ "command": "evolve", "meta": meta_json(&meta), "columns": ["x", "t", "re", "im"], "rows": rows }))?;
            }
        }
    }
    Ok(())
}

pub fn verify(args: VerifyArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    file.check_keys(&["only", "tol-scale", "out", "format"])?;
    let r = Resolver { file: &file };
    let only = r
        .get_list::<String>(args.only, "only")?
        .map(|list| {
            list.iter()
                .map(|s| s.parse::<CheckId>().map_err(|e| CliError::Config(e.to_string())))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let tol_scale = r.get(args.tol_scale, "tol-scale")?.unwrap_or(1.0);
    if !(tol_scale > 0.0 && f64::is_finite(tol_scale)) {
        return Err(CliError::Config("--tol-scale must be positive".into()));
    }
    let format = r.get_enum(args.common.format, "format")?.unwrap_or(Format::Report);
    let out: Option<PathBuf> = r.get(args.common.out, "out")?;

    let report = run_suite(&SuiteOptions { tol_scale, only });
    for c in &report.checks {
        eprintln!(
            "criterion {:>2} [{}] {}",
            c.criterion,
            if c.passed { "PASS" } else { "FAIL" },
            c.id
        );
    }
    let mut w = open_out(out.as_deref())?;
    match format {
        Format::Report => write_json(&mut w, &serde_json::to_value(&report)?)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .flat_map(|c| {
                    c.measurements.iter().map(move |m| {
                        vec![
                            c.id.to_string(),
                            c.criterion.to_string(),
                            m.passed.to_string(),
                            format!("\"{}\"", m.label.replace('"', "'")),
                            m.value.to_string(),
                            serde_json::to_value(m.bound).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                            m.limit.to_string(),
                        ]
                    })
                })
                .collect();
            write_table(&mut w, &vec![kv("tol-scale", tol_scale)], "check,criterion,passed,label,value,bound,limit", &rows)?;
        }
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::CheckFailed(format!("{failed} of {} checks failed", report.checks.len())));
    }
    Ok(())
}

fn c_str(z: Complex64) -> [String; 2] {
    [z.re.to_string(), z.im.to_string()]
}

pub fn bargmann(args: BargmannArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    file.check_keys(&["n", "a", "m", "t", "x", "zre", "zim", "table", "nodes", "allow-large-n", "out", "format"])?;
    let r = Resolver { file: &file };
    let n: u32 = r.get(args.n, "n")?.unwrap_or(6);
    if n > BARGMANN_MAX_N && !r.flag(args.allow_large_n, "allow-large-n")? {
        return Err(CliError::Config(format!(
            "n = {n} exceeds {BARGMANN_MAX_N}; the plane quadrature cost grows quickly, pass --allow-large-n to proceed"
        )));
    }
    let a = r.get(args.a, "a")?.unwrap_or(1.5);
    let m = r.get(args.m, "m")?.unwrap_or(3.0);
    let t = nonneg_grid(&r, args.t, "t", "0:0.8:3")?;
    let x = grid(&r, args.x, "x", "-1:1:5")?;
    let zre = grid(&r, args.zre, "zre", "-1:1:5")?;
    let zim = grid(&r, args.zim, "zim", "-1:1:5")?;
    let table = r.get_enum(args.table, "table")?.unwrap_or(Table::Roundtrip);
    let nodes: usize = r.get(args.nodes, "nodes")?.unwrap_or(96);
    if !(8..=192).contains(&nodes) {
        return Err(CliError::Config("--nodes must lie in 8..=192".into()));
    }
    let format = r.get_enum(args.common.format, "format")?.unwrap_or(Format::Csv);
    let out: Option<PathBuf> = r.get(args.common.out, "out")?;
    let plane = PlaneQuadrature::inversion(nodes, nodes * 4 / 3, 1e-7)?;
    let p = SuperoscillationParams::new(n, a)?;
    let coeffs = coefficients(p);
    let cvals = coeffs.values()?.to_vec();

    let meta: Meta = vec![
        kv("n", n),
        kv("a", a),
        kv("m", m),
        kv("t", t),
        kv("x", x),
        kv("zre", zre),
        kv("zim", zim),
        kv("nodes", nodes),
    ];

    // xi samples, with the explicit coherent-state sum as a consistency column
    let mut xi_rows = Vec::new();
    let mut xi_worst = 0.0f64;
    if format == Format::Report || table == Table::Xi {
        for &tt in &t.points() {
            let xi = XiFunction::new(n, a, m, tt)?;
            for &u in &zre.points() {
                for &v in &zim.points() {
                    let z = Complex64::new(u, v);
                    let val = xi.eval(z);
                    let direct: Complex64 = cvals
                        .iter()
                        .enumerate()
                        .map(|(j, &c)| {
                            let l = frequency(n, j);
                            theta(l, m, tt) * c * (Complex64::new(0.0, l / std::f64::consts::SQRT_2) * z - 0.25 * l * l).exp()
                        })
                        .sum::<Complex64>()
                        / PI_POW_NEG_QUARTER;
                    let d = (val - direct).norm();
                    xi_worst = xi_worst.max(d);
                    let [a0, a1] = c_str(val);
                    xi_rows.push(vec![u.to_string(), v.to_string(), tt.to_string(), a0, a1, d.to_string()]);
                }
            }
        }
    }

    let mut rt_rows = Vec::new();
    let mut rt_worst = 0.0f64;
    if format == Format::Report || table == Table::Roundtrip {
        for &tt in &t.points() {
            let xi = XiFunction::new(n, a, m, tt)?;
            for &xx in &x.points() {
                let u = evolve_homogeneous(n, a, m, xx, tt)?;
                let inv = sb_inverse(|z| xi.eval(z), xx, &plane)?;
                let e = (u - inv).norm();
                rt_worst = rt_worst.max(e);
                let [u0, u1] = c_str(u);
                let [i0, i1] = c_str(inv);
                rt_rows.push(vec![xx.to_string(), tt.to_string(), u0, u1, i0, i1, e.to_string()]);
            }
        }
    }

    let mut d_rows = Vec::new();
    let (mut f_worst, mut d_worst) = (0.0f64, 0.0f64);
    if format == Format::Report || table == Table::Derivative {
        for &xx in &x.points() {
            let f = eval_fn_product(p, xx);
            let frep = fn_integral_rep(n, a, xx, &plane)?;
            let df = eval_fn_derivative(p, xx)?;
            let drep = fn_derivative_integral_rep(n, a, xx, &plane)?;
            let (fe, de) = ((f - frep).norm(), (df - drep).norm());
            f_worst = f_worst.max(fe);
            d_worst = d_worst.max(de);
            let mut row = vec![xx.to_string()];
            row.extend(c_str(f));
            row.extend(c_str(frep));
            row.push(fe.to_string());
            row.extend(c_str(df));
            row.extend(c_str(drep));
            row.push(de.to_string());
            d_rows.push(row);
        }
    }

    let mut w = open_out(out.as_deref())?;
    match format {
        Format::Csv => {
            let (header, rows) = match table {
                Table::Xi => ("re_z,im_z,t,xi_re,xi_im,self_consistency", &xi_rows),
                Table::Roundtrip => ("x,t,u_re,u_im,inverse_re,inverse_im,error", &rt_rows),
                Table::Derivative => (
                    "x,fn_re,fn_im,fn_rep_re,fn_rep_im,fn_error,dfn_re,dfn_im,dfn_rep_re,dfn_rep_im,dfn_error",
                    &d_rows,
                ),
            };
            let mut meta = meta;
            meta.push(kv("table", table.to_possible_value().expect("named").get_name()));
            write_table(&mut w, &meta, header, rows)?;
        }
        Format::Report => write_json(
            &mut w,
            &json!({
                "command": "bargmann",
                "meta": meta_json(&meta),
                "max_xi_self_consistency": xi_worst,
                "max_roundtrip_error": rt_worst,
                "max_fn_representation_error": f_worst,
                "max_derivative_representation_error": d_worst,
            }),
        )?,
    }
    Ok(())
}

pub fn kernel(args: KernelArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    file.check_keys(&["m", "xpos", "s", "t", "out", "format"])?;
    let r = Resolver { file: &file };
    let m = r.get(args.m, "m")?.unwrap_or(0.0);
    let xpos = r.get(args.xpos, "xpos")?.unwrap_or(0.0);
    let s = nonneg_grid(&r, args.s, "s", "0:3:7")?;
    let t = nonneg_grid(&r, args.t, "t", "0:3:7")?;
    let format = r.get_enum(args.common.format, "format")?.unwrap_or(Format::Csv);
    let out: Option<PathBuf> = r.get(args.common.out, "out")?;
    let params = CovKernelParams::new(m, xpos)?;
    let mut rows = Vec::new();
    for &sv in &s.points() {
        for &tv in &t.points() {
            rows.push([sv, tv, cov_kernel(params, sv, tv)?]);
        }
    }
    let meta: Meta = vec![kv("m", m), kv("xpos", xpos), kv("s", s), kv("t", t)];
    let mut w = open_out(out.as_deref())?;
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(f64::to_string).collect()).collect();
            write_table(&mut w, &meta, "s,t,K", &rows)?;
        }
        Format::Report => {
            let ev = gram_eigenvalues(params, &s.points())?;
            write_json(
                &mut w,
                &json!({ "command": "kernel", "meta": meta_json(&meta), "columns": ["s", "t", "K"], "rows": rows, "gram_eigenvalues_on_s": ev }),
            )?;
        }
    }
    Ok(())
}

pub fn coeffs(args: CoeffsArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    file.check_keys(&["n", "a", "out", "format"])?;
    let r = Resolver { file: &file };
    let n: u32 = r.get(args.n, "n")?.unwrap_or(10);
    let a = r.get(args.a, "a")?.unwrap_or(1.5);
    let format = r.get_enum(args.common.format, "format")?.unwrap_or(Format::Csv);
    let out: Option<PathBuf> = r.get(args.common.out, "out")?;
    let cs = coefficients(SuperoscillationParams::new(n, a)?);
    let values = cs.values().ok();
    let meta: Meta = vec![kv("n", n), kv("a", a)];
    let mut w = open_out(out.as_deref())?;
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = (0..cs.len())
                .map(|j| {
                    vec![
                        j.to_string(),
                        frequency(n, j).to_string(),
                        values.map_or(String::new(), |v| v[j].to_string()),
                        cs.log_magnitudes()[j].to_string(),
                        cs.signs()[j].to_string(),
                    ]
                })
                .collect();
            write_table(&mut w, &meta, "j,lambda,value,log_magnitude,sign", &rows)?;
        }
        Format::Report => {
            let max_log = cs.log_magnitudes().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            write_json(
                &mut w,
                &json!({
                    "command": "coeffs",
                    "meta": meta_json(&meta),
                    "values_materialized": values.is_some(),
                    "sum": cs.sum().ok(),
                    "first_moment": cs.moment(1).ok(),
                    "max_log_magnitude": max_log,
                }),
            )?;
        }
    }
    Ok(())
}
