use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use toric_ding::extremal::{covariance, dh_of_vector_field};
use toric_ding::functionals::extremal_pairing;
use toric_ding::normal_cone::halving_grid;
use toric_ding::oracle::convergence_table;
use toric_ding::rat::{self, Rat};
use toric_ding::{
    corpus, d_na, d_z_na, dh_measure, e_na, extremal_affine, inner_product, io, j_na, validate_fano, verdict,
    verify_family, FanoPolytope, NormalConeFamily, PlConcave, TwistProblem, VertexChoice,
};

use crate::args::{Common, Format};
use crate::output::{self, exact, exact_vec, float, float_vec, PlotData};
use crate::CliError;

/// What a command hands back to `main` for printing.
pub struct Report {
    pub stdout: String,
    pub plot: Option<PlotData>,
    /// Set when an identity or tolerance check failed.
    pub mismatch: Option<String>,
}

const DENSITY_SAMPLES: usize = 32;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_polytope(path: &Path) -> Result<FanoPolytope, CliError> {
    let p = io::parse_polytope(&read(path)?).map_err(|e| CliError::from_core(e, path))?;
    validate_fano(&p).map_err(|e| CliError::from_core(e, path))
}

fn load_configuration(domain: &FanoPolytope, path: &Path) -> Result<PlConcave, CliError> {
    let tc = io::parse_test_configuration(&read(path)?).map_err(|e| CliError::from_core(e, path))?;
    PlConcave::new(domain, tc.affines).map_err(|e| CliError::from_core(e, path))
}

pub fn parse_rat_list(text: &str, what: &str) -> Result<Vec<Rat>, CliError> {
    text.split(',').map(|s| rat::parse_rat(s.trim()).map_err(|e| CliError::Usage(format!("{what}: {e}")))).collect()
}

fn parse_int_list(text: &str, what: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|e| CliError::Usage(format!("{what}: '{s}': {e}"))))
        .collect()
}

fn check_len(v: &[Rat], n: usize, what: &str) -> Result<(), CliError> {
    if v.len() == n {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what}: expected {n} components, got {}", v.len())))
    }
}

fn render(
    common: &Common,
    default: Format,
    json: Value,
    csv: impl FnOnce() -> Result<String, CliError>,
) -> Result<String, CliError> {
    match common.format.unwrap_or(default) {
        Format::Json => Ok(serde_json::to_string_pretty(&json).expect("json") + "\n"),
        Format::Csv => csv(),
    }
}

pub fn analyze(common: &Common) -> Result<Report, CliError> {
    let p = load_polytope(&common.polytope)?;
    let prec = common.precision;
    let ext = extremal_affine(&p).map_err(CliError::core)?;
    let cov = covariance(&p).map_err(CliError::core)?;
    let extremal_dh = dh_of_vector_field(&p, &ext.theta.gradient).map_err(CliError::core)?;
    let stability = verdict(&p).map_err(CliError::core)?;
    let json = json!({
        "dim": p.dim(),
        "volume": exact(p.volume()),
        "volume_float": float(p.volume(), prec),
        "degree": exact(&p.degree()),
        "degree_float": float(&p.degree(), prec),
        "barycenter": exact_vec(p.barycenter()),
        "barycenter_float": float_vec(p.barycenter(), prec),
        "covariance": cov.iter().map(|r| exact_vec(r)).collect::<Vec<_>>(),
        "theta": output::to_value(&ext.theta),
        "vartheta": exact(&ext.vartheta),
        "vartheta_float": float(&ext.vartheta, prec),
        "extremal_dh": output::to_value(&extremal_dh),
        "verdict": output::to_value(&stability),
        "vertices": p.vertices().iter().map(|v| exact_vec(v)).collect::<Vec<_>>(),
    });
    let stdout = render(common, Format::Json, json, || {
        let mut rows = vec![("volume".to_string(), p.volume().clone()), ("degree".to_string(), p.degree())];
        rows.extend(p.barycenter().iter().enumerate().map(|(i, b)| (format!("barycenter_{i}"), b.clone())));
        rows.extend(ext.theta.gradient.iter().enumerate().map(|(i, g)| (format!("theta_gradient_{i}"), g.clone())));
        rows.push(("theta_constant".into(), ext.theta.constant.clone()));
        rows.push(("vartheta".into(), ext.vartheta.clone()));
        output::quantity_csv(&rows, prec)
    })?;
    let mut plot = PlotData::default();
    plot.add_measure("extremal_", &extremal_dh, DENSITY_SAMPLES);
    Ok(Report { stdout, plot: Some(plot), mismatch: None })
}

pub fn tc_eval(common: &Common, tc: &Path, rhos: &[String]) -> Result<Report, CliError> {
    let p = load_polytope(&common.polytope)?;
    let f = load_configuration(&p, tc)?;
    let prec = common.precision;
    let ext = extremal_affine(&p).map_err(CliError::core)?;
    let dh = dh_measure(&f).map_err(CliError::core)?;
    let mut inner = Vec::new();
    for text in rhos {
        let rho = parse_rat_list(text, "--rho")?;
        check_len(&rho, p.dim(), "--rho")?;
        let value = inner_product(&f, &rho).map_err(CliError::core)?;
        inner.push((rho, value));
    }
    let values = [
        ("e_na", e_na(&f)),
        ("j_na", j_na(&f)),
        ("d_na", d_na(&f)),
        ("extremal_pairing", extremal_pairing(&f, &ext)),
        ("d_z_na", d_z_na(&f, &ext)),
    ];
    let mut json = serde_json::Map::new();
    for (k, v) in &values {
        json.insert(k.to_string(), exact(v));
        json.insert(format!("{k}_float"), float(v, prec));
    }
    json.insert(
        "inner_products".into(),
        Value::Array(
            inner
                .iter()
                .map(|(rho, v)| json!({"rho": exact_vec(rho), "value": exact(v), "value_float": float(v, prec)}))
                .collect(),
        ),
    );
    json.insert("dh".into(), output::to_value(&dh));
    json.insert("outside_calibrated_regime".into(), Value::Bool(f.outside_calibrated_regime()));
    json.insert("affines_active".into(), Value::from(f.affines().len()));
    let stdout = render(common, Format::Json, Value::Object(json), || {
        let mut rows: Vec<(String, Rat)> = values.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        for (rho, v) in &inner {
            let label = rho.iter().map(rat::format_rat).collect::<Vec<_>>().join(";");
            rows.push((format!("inner_product[{label}]"), v.clone()));
        }
        output::quantity_csv(&rows, prec)
    })?;
    let mut plot = PlotData::default();
    plot.add_measure("", &dh, DENSITY_SAMPLES);
    Ok(Report { stdout, plot: Some(plot), mismatch: None })
}

pub fn reduce(common: &Common, tc: &Path, segment: Option<&str>, samples: usize) -> Result<Report, CliError> {
    let p = load_polytope(&common.polytope)?;
    let f = load_configuration(&p, tc)?;
    let problem = TwistProblem::new(&f);
    let reduction = problem.reduce().map_err(CliError::core)?;
    let mut json = output::to_value(&reduction);
    let mut plot = None;
    if let Some(seg) = segment {
        let (a, b) =
            seg.split_once(':').ok_or_else(|| CliError::Usage("--segment must look like a1,a2:b1,b2".into()))?;
        let (a, b) = (parse_rat_list(a, "--segment")?, parse_rat_list(b, "--segment")?);
        check_len(&a, p.dim(), "--segment start")?;
        check_len(&b, p.dim(), "--segment end")?;
        if samples < 2 {
            return Err(CliError::Usage("--samples must be at least 2".into()));
        }
        let mut data = PlotData::default();
        let mut rows = Vec::new();
        for i in 0..samples {
            let t = rat::rat(i as i64, samples as i64 - 1);
            let rho: Vec<Rat> = a.iter().zip(&b).map(|(x, y)| x + (y - x) * &t).collect();
            let j = problem.j_at(&rho).map_err(CliError::core)?;
            data.push("j_twisted", rat::to_f64(&t), rat::to_f64(&j));
            rows.push(json!({"t": exact(&t), "rho": exact_vec(&rho), "j": exact(&j)}));
        }
        if common.emit_plot_data.is_none() {
            json["segment"] = Value::Array(rows);
        }
        plot = Some(data);
    }
    let stdout = render(common, Format::Json, json, || {
        let mut rows = vec![("j_na".to_string(), reduction.j_na.clone()), ("j_t_na".into(), reduction.j_t.clone())];
        rows.extend(reduction.rho_star.iter().enumerate().map(|(i, r)| (format!("rho_star_{i}"), r.clone())));
        output::quantity_csv(&rows, common.precision)
    })?;
    Ok(Report { stdout, plot, mismatch: None })
}

pub fn normal_cone(common: &Common, grid: Option<&str>, vertex: &str) -> Result<Report, CliError> {
    let p = load_polytope(&common.polytope)?;
    let choice = match vertex {
        "auto" => VertexChoice::Auto,
        i => VertexChoice::Index(
            i.parse().map_err(|_| CliError::Usage(format!("--vertex must be 'auto' or an index, got '{i}'")))?,
        ),
    };
    let family = NormalConeFamily::new(&p, choice).map_err(CliError::core)?;
    let grid = match grid {
        Some(text) => parse_rat_list(text, "--grid")?,
        None => halving_grid(&family.default_cap(), 3),
    };
    let report = verify_family(&family, &grid).map_err(CliError::core)?;
    let prec = common.precision;
    let mut json = output::to_value(&report);
    json["default_cap"] = exact(&family.default_cap());
    json["passed"] = Value::Bool(report.passed());
    let stdout = render(common, Format::Json, json, || {
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| {
                [&r.c, &r.j_na, &r.j_t_na, &r.d_na, &r.extremal_pairing, &r.d_z_na]
                    .iter()
                    .map(|q| rat::format_rat(q))
                    .chain(std::iter::once(output::float_text(&r.d_z_na, prec)))
                    .collect()
            })
            .collect();
        output::table_csv(&["c", "j_na", "j_t_na", "d_na", "extremal_pairing", "d_z_na", "d_z_na_float"], &rows)
    })?;
    let mut plot = PlotData::default();
    for r in &report.rows {
        let c = rat::to_f64(&r.c);
        for (name, v) in [
            ("j_na", &r.j_na),
            ("j_t_na", &r.j_t_na),
            ("d_na", &r.d_na),
            ("extremal_pairing", &r.extremal_pairing),
            ("d_z_na", &r.d_z_na),
        ] {
            plot.push(name, c, rat::to_f64(v));
        }
    }
    for r in &report.rows {
        plot.add_measure(&format!("dh_c={}_", rat::format_rat(&r.c)), &r.dh, DENSITY_SAMPLES);
    }
    let mismatch = (!report.passed()).then(|| format!("{} identity check(s) failed", report.mismatches.len()));
    Ok(Report { stdout, plot: Some(plot), mismatch })
}

pub fn oracle(common: &Common, tc: &Path, ladder: &str, rho: Option<&str>, tol: &str) -> Result<Report, CliError> {
    let p = load_polytope(&common.polytope)?;
    let f = load_configuration(&p, tc)?;
    let ladder: Vec<u32> = parse_int_list(ladder, "--k-ladder")?
        .into_iter()
        .map(|k| u32::try_from(k).ok().filter(|k| *k >= 1))
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::Usage("--k-ladder values must be positive integers".into()))?;
    if ladder.is_empty() || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage("--k-ladder must be nonempty and strictly increasing".into()));
    }
    let rho = match rho {
        Some(text) => parse_int_list(text, "--rho")?,
        None => (0..p.dim()).map(|i| i64::from(i == 0)).collect(),
    };
    if rho.len() != p.dim() {
        return Err(CliError::Usage(format!("--rho: expected {} components, got {}", p.dim(), rho.len())));
    }
    let tol = rat::parse_rat(tol).map_err(|e| CliError::Usage(format!("--tol: {e}")))?;
    let table = convergence_table(&f, &rho, &ladder).map_err(CliError::core)?;
    let prec = common.precision;
    let last = table.last().expect("nonempty ladder");
    let worst =
        [&last.mean_error, &last.second_moment_error, &last.inner_error].into_iter().max().expect("three").clone();
    let json = json!({
        "rho": rho,
        "tolerance": exact(&tol),
        "final_max_error": exact(&worst),
        "within_tolerance": worst <= tol,
        "rows": output::to_value(&table),
    });
    let stdout = render(common, Format::Csv, json, || {
        let rows: Vec<Vec<String>> = table
            .iter()
            .map(|r| {
                let mut row = vec![r.k.to_string(), r.n_k.to_string()];
                row.extend(
                    [
                        &r.mean,
                        &r.second_moment,
                        &r.gabor_inner,
                        &r.exact_mean,
                        &r.exact_second_moment,
                        &r.exact_inner,
                        &r.mean_error,
                        &r.second_moment_error,
                        &r.inner_error,
                    ]
                    .iter()
                    .map(|q| rat::format_rat(q)),
                );
                row.extend(
                    [&r.mean_error, &r.second_moment_error, &r.inner_error].iter().map(|q| output::float_text(q, prec)),
                );
                row
            })
            .collect();
        output::table_csv(
            &[
                "k",
                "n_k",
                "mean",
                "second_moment",
                "gabor_inner",
                "exact_mean",
                "exact_second_moment",
                "exact_inner",
                "mean_error",
                "second_moment_error",
                "inner_error",
                "mean_error_float",
                "second_moment_error_float",
                "inner_error_float",
            ],
            &rows,
        )
    })?;
    let mut plot = PlotData::default();
    for r in &table {
        let k = f64::from(r.k);
        plot.push("mean_error", k, rat::to_f64(&r.mean_error));
        plot.push("second_moment_error", k, rat::to_f64(&r.second_moment_error));
        plot.push("inner_error", k, rat::to_f64(&r.inner_error));
    }
    let mismatch = (worst > tol)
        .then(|| format!("final-k error {} exceeds tolerance {}", rat::format_rat(&worst), rat::format_rat(&tol)));
    Ok(Report { stdout, plot: Some(plot), mismatch })
}

pub fn corpus_listing(name: Option<&str>) -> Result<Report, CliError> {
    let stdout = match name {
        None => corpus::all().into_iter().map(|(n, _)| format!("{n}\n")).collect(),
        Some(n) => {
            let p = corpus::by_name(n).ok_or_else(|| CliError::Usage(format!("unknown corpus polytope '{n}'")))?;
            serde_json::to_string_pretty(&io::polytope_to_json(&p)).expect("json") + "\n"
        }
    };
    Ok(Report { stdout, plot: None, mismatch: None })
}
