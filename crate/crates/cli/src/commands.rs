use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use graded_heat::algebra::{word, CliffordElement};
use graded_heat::asymptotics::index_density;
use graded_heat::format::{parse_index_input, parse_operator, write_heat_coefficients, ModelDoc};
use graded_heat::heat_jets::{theta_recursion, GeometryJets};
use graded_heat::mehler::mehler_kernel;
use graded_heat::oracle::{fd_residual, FdGrid};
use graded_heat::scalar::{ExactComplex, Scalar};
use graded_heat::verify::{self, TrendRow, VerifyOptions};

use crate::config::RunConfig;

/// Whether every check a command makes passed.
pub type Passed = bool;

pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub out: &'a Path,
    pub tolerance: Option<f64>,
}

fn g(v: f64) -> String {
    format!("{v:.16e}")
}

struct Table {
    path: PathBuf,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(ctx: &Ctx, name: &str, header: &[&str]) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Table { path: ctx.out.join(name), writer })
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) -> Result<()> {
        self.writer.write_record(fields.into_iter().collect::<Vec<_>>())?;
        Ok(())
    }

    fn finish(self) -> Result<()> {
        let bytes = self.writer.into_inner().map_err(|e| anyhow!("{e}"))?;
        fs::write(&self.path, bytes).with_context(|| format!("cannot write {}", self.path.display()))?;
        println!("wrote {}", self.path.display());
        Ok(())
    }
}

fn read_input(given: Option<&PathBuf>, configured: Option<&PathBuf>, what: &str) -> Result<String> {
    let path = given.or(configured).ok_or_else(|| anyhow!("no {what} input: pass --input or set inputs.{what}"))?;
    fs::read_to_string(path).with_context(|| format!("cannot read {what} input {}", path.display()))
}

pub fn algebra_selftest(ctx: &Ctx) -> Result<Passed> {
    let report = verify::run_criterion(1, &VerifyOptions::default()).expect("criterion 1");
    let mut t = Table::new(ctx, "algebra.csv", &["tag", "n", "word", "str_re", "str_im"])?;
    for n in [2usize, 4, 6] {
        for w in 0..1u32 << n {
            let s = CliffordElement::<ExactComplex>::basis(n, 1, w).supertrace()?.to_c64();
            t.row(["index".into(), n.to_string(), word::display(w, "c"), g(s.re), g(s.im)])?;
        }
    }
    t.finish()?;
    println!("{report}");
    Ok(report.passed)
}

pub fn theta(ctx: &Ctx, input: Option<&PathBuf>, j: Option<usize>, d: Option<usize>) -> Result<Passed> {
    let op = parse_operator::<ExactComplex>(&read_input(input, ctx.cfg.inputs.operator.as_ref(), "operator")?)?;
    let j_max = j.unwrap_or(ctx.cfg.truncation.j);
    let bound = d.unwrap_or(ctx.cfg.truncation.d);
    let h = theta_recursion(&op, &GeometryJets::flat(op.dim(), op.twist()), j_max, bound)?;

    let dump = ctx.out.join("theta.toml");
    fs::write(&dump, write_heat_coefficients(&h)?).with_context(|| format!("cannot write {}", dump.display()))?;
    println!("wrote {}", dump.display());

    let mut t = Table::new(ctx, "theta.csv", &["tag", "j", "preset", "order", "bound"])?;
    for c in &h.grading_checks {
        let order = c.order.map_or_else(|| "zero".to_string(), |o| o.to_string());
        t.row(["hkrec".into(), c.j.to_string(), c.preset.clone(), order, (2 * c.j).to_string()])?;
    }
    t.finish()?;

    if op.dim() % 2 == 0 {
        let density = h.supertrace_density()?;
        let v = density.to_c64();
        println!("supertrace density: ({}) pi^{}  = {} {:+}i", density.coeff, density.pi_power, g(v.re), g(v.im));
    }
    Ok(true)
}

pub fn mehler_eval(ctx: &Ctx, input: Option<&PathBuf>) -> Result<Passed> {
    let text = read_input(input, ctx.cfg.inputs.model.as_ref(), "model")?;
    let doc: ModelDoc = toml::from_str(&text).context("invalid model file")?;
    let base = doc.to_model()?;
    let n = base.dim();
    let [lo, hi] = ctx.cfg.tolerance.fd_ratio;
    let points: Vec<Vec<f64>> = [[0.3, -0.2, 0.1], [0.0, 0.4, -0.3], [-0.5, 0.1, 0.2]]
        .iter()
        .map(|p| (0..n).map(|i| p[i % 3]).collect())
        .collect();

    let mut ok = true;
    let mut t = Table::new(ctx, "mehler.csv", &["tag", "t", "trace_re", "trace_im", "fd_ratio"])?;
    let mut times = vec![base.t];
    times.extend(ctx.cfg.sweep.t.iter().copied().filter(|&s| s != base.t));
    for time in times {
        let m = base.with_time(time);
        let tr = mehler_kernel(&m, &vec![0.0; n])?.trace();
        let grid = FdGrid { points: points.clone(), t: time, h: 0.05 };
        let fd = fd_residual(|s: f64, x: &[f64]| mehler_kernel(&m.with_time(s), x), &m.operator(), &grid)?;
        ok &= (lo..=hi).contains(&fd.ratio);
        t.row(["mehler".into(), g(time), g(tr.re), g(tr.im), g(fd.ratio)])?;
    }
    t.finish()?;
    Ok(ok)
}

pub fn index_density_cmd(ctx: &Ctx, input: Option<&PathBuf>) -> Result<Passed> {
    let inp = parse_index_input(&read_input(input, ctx.cfg.inputs.index.as_ref(), "index")?)?;
    let top = index_density(&inp)?.top();
    let v = top.to_c64();
    let mut t = Table::new(ctx, "index.csv", &["tag", "degree", "pi_power", "exact", "value_re", "value_im"])?;
    t.row(["index".into(), inp.n.to_string(), top.pi_power.to_string(), top.coeff.to_string(), g(v.re), g(v.im)])?;
    t.finish()?;
    Ok(true)
}

fn trend_table(ctx: &Ctx, name: &str, param: &str, rows: &[TrendRow], tol: f64) -> Result<Passed> {
    let mut t = Table::new(ctx, name, &["tag", param, "t", "predicted", "oracle", "rel_err"])?;
    for r in rows {
        t.row(["limit".into(), format!("{}", r.param), g(r.t), g(r.predicted), g(r.oracle), g(r.rel_err)])?;
    }
    t.finish()?;
    let decreasing = rows.windows(2).all(|w| w[1].rel_err < w[0].rel_err);
    let last = rows.last().map_or(f64::INFINITY, |r| r.rel_err);
    println!("relative error decreasing: {decreasing}; last {last:.3e} (tolerance {tol:.3e})");
    Ok(decreasing && last <= tol)
}

pub fn bk_asymptotics(ctx: &Ctx) -> Result<Passed> {
    let b = &ctx.cfg.bergman;
    if ctx.cfg.sweep.p.is_empty() {
        bail!("sweep.p is empty");
    }
    let rows = verify::bergman_trend(b.a, b.twist, b.u, &ctx.cfg.sweep.p, ctx.cfg.lattice.sites)?;
    trend_table(ctx, "bk.csv", "p", &rows, ctx.tolerance.unwrap_or(ctx.cfg.tolerance.bergman))
}

pub fn odd_asymptotics(ctx: &Ctx) -> Result<Passed> {
    let o = &ctx.cfg.odd;
    if ctx.cfg.sweep.r.is_empty() {
        bail!("sweep.r is empty");
    }
    let rows = verify::odd_trend(o.b, o.t, &ctx.cfg.sweep.r, ctx.cfg.lattice.sites)?;
    trend_table(ctx, "odd.csv", "r", &rows, ctx.tolerance.unwrap_or(ctx.cfg.tolerance.odd))
}

pub fn oracle_lattice(ctx: &Ctx) -> Result<Passed> {
    let lat = &ctx.cfg.lattice;
    let rows = verify::field_comparison(lat.field, &ctx.cfg.sweep.t, lat.sites)?;
    let tol = ctx.tolerance.unwrap_or(ctx.cfg.tolerance.lattice);
    let mut ok = true;
    let mut t = Table::new(
        ctx,
        "lattice.csv",
        &["tag", "t", "mehler", "lattice", "landau", "lattice_rel_err", "landau_rel_err"],
    )?;
    for r in &rows {
        ok &= r.lattice_err <= tol && r.landau_err <= ctx.cfg.tolerance.landau;
        t.row(["mehler".into(), g(r.t), g(r.mehler), g(r.lattice), g(r.landau), g(r.lattice_err), g(r.landau_err)])?;
    }
    t.finish()?;
    Ok(ok)
}

const CRITERION_TAGS: [&str; 10] =
    ["index", "hkrec", "imp", "mehler", "mehler", "limit", "limit", "index", "hkrec", "limit"];

pub fn verify_cmd(ctx: &Ctx, which: &str) -> Result<Passed> {
    let opts = VerifyOptions {
        seed: ctx.cfg.verify.seed,
        pairs_per_preset: ctx.cfg.verify.pairs_per_preset,
        lattice_sites: ctx.cfg.lattice.sites,
    };
    let reports = match which {
        "all" => verify::run_all(&opts),
        id => {
            let id: usize = id.parse().map_err(|_| anyhow!("expected `all` or a criterion number, got {id:?}"))?;
            vec![verify::run_criterion(id, &opts).ok_or_else(|| anyhow!("no criterion {id}"))?]
        }
    };
    let mut t = Table::new(ctx, "verify.csv", &["tag", "id", "name", "passed", "budget_s", "detail"])?;
    for r in &reports {
        println!("{r}");
        t.row([
            CRITERION_TAGS[r.id - 1].into(),
            r.id.to_string(),
            r.name.into(),
            r.passed.to_string(),
            r.budget.as_secs().to_string(),
            r.detail.clone(),
        ])?;
    }
    t.finish()?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", reports.len() - failed, reports.len());
    Ok(failed == 0)
}
