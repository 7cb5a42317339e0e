use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use multigauss::figures::{self, SeriesData, CURVE_POINTS, SURFACE_POINTS};
use multigauss::oracle::{self, OracleReport, Suite};
use multigauss::rng::seeded;
use multigauss::univariate::cumulants_from_moments;
use multigauss::{
    BivariateMultiGauss, BivariateParams, LogMultiGauss, MultiGauss, ShapeParam, TruncationPolicy,
};

use crate::error::CliError;
use crate::output::{write_records, write_samples, write_table, Record};
use crate::{EvalArgs, Family, FigureArgs, Grid, Kind, Params, SampleArgs, VerifyArgs};

type Result<T> = std::result::Result<T, CliError>;

fn policy(p: &Params) -> Result<TruncationPolicy> {
    Ok(match p.max_terms {
        Some(n) => TruncationPolicy::with_max_terms(n)?,
        None => TruncationPolicy::default(),
    })
}

fn mg(p: &Params) -> Result<MultiGauss> {
    Ok(MultiGauss::with_policy(p.mu, p.sigma, ShapeParam::new(p.m)?, policy(p)?)?)
}

fn lmg(p: &Params) -> Result<LogMultiGauss> {
    Ok(LogMultiGauss::from_base(mg(p)?))
}

fn bivariate(p: &Params) -> Result<BivariateMultiGauss> {
    let params = BivariateParams::new(p.mu1, p.mu2, p.sigma1, p.sigma2, p.rho)?;
    Ok(BivariateMultiGauss::with_policy(params, ShapeParam::new(p.m)?, policy(p)?)?)
}

fn label(family: Family, p: &Params) -> String {
    match family {
        Family::Mv => format!("M={},rho={}", p.m, p.rho),
        _ => format!("M={}", p.m),
    }
}

/// Abscissas from `--x` or the grid flags, falling back to `(from, to, points)`.
fn abscissas(g: &Grid, default: (f64, f64, usize)) -> Result<Vec<f64>> {
    if let Some(xs) = &g.x {
        if xs.is_empty() {
            return Err(CliError::Invalid("--x needs at least one value".into()));
        }
        if xs.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Invalid("--x values must be finite".into()));
        }
        let mut xs = xs.clone();
        xs.sort_by(f64::total_cmp);
        return Ok(xs);
    }
    let from = g.from.unwrap_or(default.0);
    let to = g.to.unwrap_or(default.1);
    let n = g.points.unwrap_or(default.2);
    if n < 2 {
        return Err(CliError::Invalid(format!("--points must be at least 2, got {n}")));
    }
    if !(from.is_finite() && to.is_finite() && from < to) {
        return Err(CliError::Invalid(format!("grid range [{from}, {to}] is empty or not finite")));
    }
    Ok((0..n)
        .map(|i| if i == n - 1 { to } else { from + (to - from) * i as f64 / (n - 1) as f64 })
        .collect())
}

fn unsupported(kind: Kind, family: Family) -> CliError {
    CliError::Invalid(format!(
        "{} is not available for the {} family",
        kind.to_possible_value().map_or("kind".into(), |v| v.get_name().to_string()),
        family.to_possible_value().map_or("this".into(), |v| v.get_name().to_string()),
    ))
}

fn curve(xs: &[f64], series: &str, f: impl Fn(f64) -> Result<f64>) -> Result<Vec<Record>> {
    xs.iter()
        .map(|&x| {
            Ok(Record::Curve {
                x,
                value: f(x)?,
                series: series.to_string(),
            })
        })
        .collect()
}

fn orders(k: Option<u32>) -> Result<Vec<u32>> {
    match k {
        Some(0) => Err(CliError::Invalid("--k must be at least 1".into())),
        Some(k) => Ok(vec![k]),
        None => Ok((1..=4).collect()),
    }
}

fn eval_records(a: &EvalArgs) -> Result<Vec<Record>> {
    let p = &a.params;
    let series = label(a.family, p);
    let (mu, s) = (p.mu, p.sigma);
    let line = (mu - 5.0 * s, mu + 5.0 * s, CURVE_POINTS);
    match (a.family, a.kind) {
        (Family::Mg, Kind::Pdf) => {
            let d = mg(p)?;
            curve(&abscissas(&a.grid, line)?, &series, |x| Ok(d.pdf(x)))
        }
        (Family::Mg, Kind::Cdf) => {
            let d = mg(p)?;
            curve(&abscissas(&a.grid, line)?, &series, |x| Ok(d.cdf(x)))
        }
        (Family::Mg, Kind::Quantile) => {
            let d = mg(p)?;
            curve(&abscissas(&a.grid, (0.01, 0.99, 99))?, &series, |u| Ok(d.quantile(u)?))
        }
        (Family::Mg, Kind::Mgf) => {
            let d = mg(p)?;
            curve(&abscissas(&a.grid, (-1.0, 1.0, 21))?, &series, |t| Ok(d.mgf(t)?))
        }
        (Family::Mg, Kind::Cf) => {
            let d = mg(p)?;
            let ws = abscissas(&a.grid, (0.0, 5.0, 51))?;
            let mut out = curve(&ws, &format!("{series},re"), |w| Ok(d.cf(w).re))?;
            out.extend(curve(&ws, &format!("{series},im"), |w| Ok(d.cf(w).im))?);
            Ok(out)
        }
        (Family::Mg, Kind::Moments) => {
            let d = mg(p)?;
            let ks: Vec<f64> = orders(a.k)?.into_iter().map(f64::from).collect();
            curve(&ks, &series, |k| Ok(d.raw_moment(k as u32)))
        }
        (Family::Mg, Kind::Cumulants) => {
            let d = mg(p)?;
            let ks: Vec<f64> = orders(a.k)?.into_iter().map(f64::from).collect();
            curve(&ks, &series, |k| Ok(d.cumulant(k as u32)))
        }
        (Family::Lmg, Kind::Pdf) => {
            let d = lmg(p)?;
            let top = (mu + 2.0 * s).exp();
            curve(&abscissas(&a.grid, (0.0, top, CURVE_POINTS))?, &series, |y| Ok(d.pdf(y)))
        }
        (Family::Lmg, Kind::Cdf) => {
            let d = lmg(p)?;
            let top = (mu + 2.0 * s).exp();
            curve(&abscissas(&a.grid, (0.0, top, CURVE_POINTS))?, &series, |y| Ok(d.cdf(y)))
        }
        (Family::Lmg, Kind::Quantile) => {
            let d = lmg(p)?;
            curve(&abscissas(&a.grid, (0.01, 0.99, 99))?, &series, |u| Ok(d.quantile(u)?))
        }
        (Family::Lmg, Kind::Moments) => {
            let d = lmg(p)?;
            let ks: Vec<f64> = orders(a.k)?.into_iter().map(f64::from).collect();
            curve(&ks, &series, |k| Ok(d.moment(k as u32)?))
        }
        (Family::Lmg, Kind::Cumulants) => {
            let d = lmg(p)?;
            let ks = orders(a.k)?;
            let top = *ks.iter().max().expect("at least one order");
            let moments = (0..=top).map(|j| d.moment(j)).collect::<multigauss::Result<Vec<_>>>()?;
            let kappa = cumulants_from_moments(&moments);
            let ks: Vec<f64> = ks.into_iter().map(f64::from).collect();
            curve(&ks, &series, |k| Ok(kappa[k as usize]))
        }
        (Family::Lmg, Kind::Mgf) => {
            let d = lmg(p)?;
            curve(&abscissas(&a.grid, (-1.0, 1.0, 21))?, &series, |t| Ok(d.mgf(t)?))
        }
        (Family::Mv, Kind::Pdf) => {
            let d = bivariate(p)?;
            let axis = |m: f64, s: f64| {
                abscissas(&a.grid, (m - 4.0 * s, m + 4.0 * s, SURFACE_POINTS))
            };
            let x1 = axis(p.mu1, p.sigma1)?;
            let x2 = axis(p.mu2, p.sigma2)?;
            let mut out = Vec::with_capacity(x1.len() * x2.len());
            for &u in &x1 {
                for &v in &x2 {
                    out.push(Record::Surface {
                        x1: u,
                        x2: v,
                        value: d.pdf(u, v),
                        series: series.clone(),
                    });
                }
            }
            Ok(out)
        }
        (family, kind) => Err(unsupported(kind, family)),
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn eval(a: &EvalArgs) -> Result<()> {
    let records = eval_records(a)?;
    if let Some(r) = records.iter().find(|r| !r.value().is_finite()) {
        return Err(CliError::Invalid(format!("non-finite value in output: {r:?}")));
    }
    let mut out = open_out(a.out.as_deref())?;
    write_records(&records, a.format, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn sample(a: &SampleArgs) -> Result<()> {
    if a.n == 0 {
        return Err(CliError::Invalid("--n must be at least 1".into()));
    }
    let mut rng = seeded(a.seed);
    let draws: Vec<Vec<f64>> = match a.family {
        Family::Mg => mg(&a.params)?.sample(a.n, &mut rng).into_iter().map(|v| vec![v]).collect(),
        Family::Lmg => lmg(&a.params)?.sample(a.n, &mut rng).into_iter().map(|v| vec![v]).collect(),
        Family::Mv => bivariate(&a.params)?.to_mv()?.sample(a.n, &mut rng),
    };
    let mut out = open_out(a.out.as_deref())?;
    write_samples(&draws, a.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn figure_records(s: &figures::FigureSeries) -> Vec<Record> {
    match &s.data {
        SeriesData::Curve(c) => c
            .x
            .iter()
            .zip(&c.value)
            .map(|(&x, &value)| Record::Curve { x, value, series: s.label.clone() })
            .collect(),
        SeriesData::Surface(g) => {
            let mut out = Vec::with_capacity(g.value.len());
            let mut values = g.value.iter();
            for &x1 in &g.x1 {
                for &x2 in &g.x2 {
                    let value = *values.next().expect("grid and values agree");
                    out.push(Record::Surface { x1, x2, value, series: s.label.clone() });
                }
            }
            out
        }
    }
}

pub fn figure(a: &FigureArgs) -> Result<()> {
    let all = figures::figure(a.id)?;
    fs::create_dir_all(&a.out)?;
    let stdout = io::stdout();
    let mut listing = stdout.lock();
    for s in &all {
        let name = format!("fig{}_{}_{}.{}", a.id, s.panel, s.slug(), a.format.extension());
        let path = a.out.join(name);
        let mut w = BufWriter::new(File::create(&path)?);
        write_records(&figure_records(s), a.format, &mut w)?;
        w.flush()?;
        writeln!(listing, "{}", path.display())?;
    }
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> Result<()> {
    let suite: Suite = a.suite.parse()?;
    let reports: Vec<OracleReport> = oracle::run(suite);
    let mut out = open_out(a.out.as_deref())?;
    write_table(&reports, a.format, &mut out)?;
    out.flush()?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    eprintln!("{} of {} reports passed", reports.len() - failed, reports.len());
    if failed > 0 || reports.is_empty() {
        return Err(CliError::VerificationFailed { failed, total: reports.len() });
    }
    Ok(())
}
