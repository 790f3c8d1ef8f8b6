use cpcover::clopper_pearson::{interval, ConfidenceSpec};
use cpcover::coverage::{
    bound_curve, classify_regime, default_p_grid, log_spaced_n_grid, rare_event_bound,
    uniform_p_grid, BoundaryMode, IntervalTable,
};
use cpcover::montecarlo::{empirical_coverage, estimate_instability_probability, SeededStream};

use crate::args::{BoundArgs, CiArgs, Command, CoverageArgs, DemoArgs, Format, Mode, SimulateArgs};
use crate::config::parse_config;
use crate::render::{to_csv, to_json, Table};
use crate::svg::{render_svg, Chart, Scale, Series};
use crate::CliError;

pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Ci(a) => ci(a),
        Command::Coverage(a) => coverage(a),
        Command::Bound(a) => bound(a),
        Command::Simulate(a) => simulate(a),
        Command::DemoRobust(a) => demo_robust(a),
    }
}

fn tabular(table: &Table, format: Format, command: &str) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(to_json(table)),
        Format::Csv => Ok(to_csv(table)),
        Format::Svg => Err(CliError::Usage(format!(
            "svg output is only available for coverage and bound, not {command}"
        ))),
    }
}

pub fn ci(a: &CiArgs) -> Result<String, CliError> {
    let spec = ConfidenceSpec::new(a.n, a.k, a.delta)?;
    let iv = interval(&spec)?;
    let table = Table::record(
        vec!["n", "k", "delta", "lower", "upper"],
        vec![a.n.into(), a.k.into(), a.delta.into(), iv.lower.into(), iv.upper.into()],
    );
    tabular(&table, a.format, "ci")
}

pub fn coverage(a: &CoverageArgs) -> Result<String, CliError> {
    let mode = match a.mode {
        Mode::Closed => BoundaryMode::Closed,
        Mode::Open => BoundaryMode::Open,
    };
    let grid = match (a.p.is_empty(), a.grid) {
        (false, _) => a.p.clone(),
        (true, Some(0)) => return Err(CliError::Usage("--grid must be at least 1".into())),
        (true, Some(m)) => uniform_p_grid(m),
        (true, None) => default_p_grid(),
    };
    let table = IntervalTable::new(a.n, a.delta)?;
    let points = grid
        .iter()
        .map(|&p| Ok((p, table.coverage(p, mode)?)))
        .collect::<Result<Vec<_>, cpcover::Error>>()?;

    if a.format == Format::Svg {
        let nominal = 1.0 - a.delta;
        let ends = [points[0].0, points[points.len() - 1].0];
        let chart = Chart {
            title: format!("Coverage probability, n = {}, delta = {}", a.n, a.delta),
            x_label: "p".into(),
            y_label: "coverage".into(),
            x_scale: Scale::Linear,
            y_scale: Scale::Linear,
            series: vec![
                Series {
                    label: format!("{} interval", mode.as_str()),
                    points: points.clone(),
                    dashed: false,
                },
                Series {
                    label: format!("1 - delta = {nominal}"),
                    points: ends.iter().map(|&p| (p, nominal)).collect(),
                    dashed: true,
                },
            ],
        };
        return Ok(render_svg(&chart));
    }
    let rows = points.iter().map(|&(p, c)| vec![p.into(), c.into()]).collect();
    tabular(&Table::rows(vec!["p", "coverage"], rows), a.format, "coverage")
}

pub fn bound(a: &BoundArgs) -> Result<String, CliError> {
    if a.points == 0 || a.n_min > a.n_max {
        return Err(CliError::Usage(format!(
            "empty grid: need --points >= 1 and --n-min <= --n-max (got {}, {}, {})",
            a.points, a.n_min, a.n_max
        )));
    }
    let grid = log_spaced_n_grid(a.n_min, a.n_max, a.points)?;
    let curves = a
        .delta
        .iter()
        .map(|&d| Ok((d, bound_curve(d, &grid)?)))
        .collect::<Result<Vec<_>, cpcover::Error>>()?;

    if a.format == Format::Svg {
        let chart = Chart {
            title: "Rare-event bound 1 - (delta/2)^(1/n)".into(),
            x_label: "n".into(),
            y_label: "bound".into(),
            x_scale: Scale::Log,
            y_scale: Scale::Log,
            series: curves
                .iter()
                .map(|(d, curve)| Series {
                    label: format!("delta = {d}"),
                    points: curve.iter().map(|&(n, b)| (n as f64, b)).collect(),
                    dashed: false,
                })
                .collect(),
        };
        return Ok(render_svg(&chart));
    }
    let rows = curves
        .iter()
        .flat_map(|(d, curve)| curve.iter().map(move |&(n, b)| vec![(*d).into(), n.into(), b.into()]))
        .collect();
    tabular(&Table::rows(vec!["delta", "n", "bound"], rows), a.format, "bound")
}

pub fn simulate(a: &SimulateArgs) -> Result<String, CliError> {
    let r = empirical_coverage(a.p, a.n, a.delta, a.reps, a.seed)?;
    let table = Table::record(
        vec![
            "p",
            "n",
            "delta",
            "seed",
            "replications",
            "hits",
            "empirical_coverage",
            "exact_coverage_reference",
            "standard_error",
        ],
        vec![
            r.p.into(),
            r.n.into(),
            r.delta.into(),
            r.seed.into(),
            r.replications.into(),
            r.hits.into(),
            r.empirical_coverage.into(),
            r.exact_coverage_reference.into(),
            r.standard_error().into(),
        ],
    );
    tabular(&table, a.format, "simulate")
}

pub fn demo_robust(a: &DemoArgs) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&a.config).map_err(|e| {
        CliError::Config(format!("cannot read config {}: {e}", a.config.display()))
    })?;
    let poly = parse_config(&text)?;
    let est = estimate_instability_probability(&poly, a.n, a.delta, SeededStream::new(a.seed, 0))?;
    let bound = rare_event_bound(est.n, est.delta)?;
    // p_hat of exactly 0 or 1 has no regime
    let regime = if est.p_hat > 0.0 && est.p_hat < 1.0 {
        Some(classify_regime(est.n, est.delta, est.p_hat)?.regime)
    } else {
        None
    };
    let table = Table::record(
        vec![
            "n",
            "k",
            "p_hat",
            "delta",
            "lower",
            "upper",
            "seed",
            "stream_id",
            "bound",
            "regime",
            "guaranteed_coverage",
        ],
        vec![
            est.n.into(),
            est.k.into(),
            est.p_hat.into(),
            est.delta.into(),
            est.interval.lower.into(),
            est.interval.upper.into(),
            est.stream.seed.into(),
            est.stream.stream_id.into(),
            bound.into(),
            regime.map(|r| r.as_str()).into(),
            regime.map(|r| r.guaranteed_coverage(est.delta)).into(),
        ],
    );
    tabular(&table, a.format, "demo-robust")
}
