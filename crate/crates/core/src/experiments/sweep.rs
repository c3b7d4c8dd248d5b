//! Parameter sweeps and the figure presets.

use std::path::Path;

use crate::analytic::{outage_o1, outage_o2, outage_oma, Kernel, Scheme};
use crate::channel::LinkClass;
use crate::error::{Error, Result};
use crate::geometry::{Position, Road};
use crate::montecarlo::{estimate, Provenance};
use crate::scenario::{Destination, Scenario};

use super::config::{parse_config, ScenarioConfig};
use super::table::{SweepRow, SweepTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// One intensity shared by all four interferer processes.
    LambdaCommon,
    /// `‖S - D1‖ = ‖S - D2‖`, relay at mid distance, lateral offsets kept.
    SourceDestinationDistance,
    /// The chain translated along the X road; `x` is the source's
    /// coordinate.
    DistanceToIntersection,
    /// `x` is the D2 rate; the D1 rate keeps its ratio to it.
    RatePair,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::LambdaCommon => "lambda_common",
            SweepVariable::SourceDestinationDistance => "source_destination_distance",
            SweepVariable::DistanceToIntersection => "distance_to_intersection",
            SweepVariable::RatePair => "rate_pair",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            SweepVariable::LambdaCommon,
            SweepVariable::SourceDestinationDistance,
            SweepVariable::DistanceToIntersection,
            SweepVariable::RatePair,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
    }
}

/// How each road's interferers are split between the classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterfererMix {
    #[default]
    Mixed,
    /// The road's whole intensity is LOS.
    LosOnly,
    NlosOnly,
}

impl InterfererMix {
    pub fn as_str(self) -> &'static str {
        match self {
            InterfererMix::Mixed => "mixed",
            InterfererMix::LosOnly => "los",
            InterfererMix::NlosOnly => "nlos",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "mixed" => Some(InterfererMix::Mixed),
            "los" => Some(InterfererMix::LosOnly),
            "nlos" => Some(InterfererMix::NlosOnly),
            _ => None,
        }
    }

    pub fn apply(self, sc: &mut Scenario) {
        if self == InterfererMix::Mixed {
            return;
        }
        for road in Road::ALL {
            let total = sc.ppp.intensity(road, LinkClass::Los) + sc.ppp.intensity(road, LinkClass::Nlos);
            let (los, nlos) = if self == InterfererMix::LosOnly { (total, 0.0) } else { (0.0, total) };
            sc.ppp.set_intensity(road, LinkClass::Los, los);
            sc.ppp.set_intensity(road, LinkClass::Nlos, nlos);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub base: Scenario,
    pub mix: InterfererMix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    pub kernels: Vec<Kernel>,
    pub monte_carlo: bool,
    pub schemes: Vec<Scheme>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub series: Vec<Series>,
    pub outputs: Outputs,
    pub trials: u64,
    pub seed: u64,
    /// Extra header lines, e.g. corrected defaults in effect.
    pub notes: Vec<String>,
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let mut g: Vec<f64> = (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect();
    g[n - 1] = hi;
    g
}

pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// The scenario at grid value `x`.
pub fn scenario_at(variable: SweepVariable, base: &Scenario, mix: InterfererMix, x: f64) -> Result<Scenario> {
    let mut sc = base.clone();
    match variable {
        SweepVariable::LambdaCommon => sc = sc.with_lambda(x),
        SweepVariable::SourceDestinationDistance => {
            let offset = (base.d1.y - base.source.y).abs();
            if !(x > offset) {
                return Err(Error::validation(
                    "source_destination_distance",
                    format!("{x} does not exceed the lateral offset {offset}"),
                ));
            }
            let along = (x * x - offset * offset).sqrt();
            let s = base.source;
            sc.relay = Position::new(s.x + 0.5 * along, s.y);
            sc.d1 = Position::new(s.x + along, s.y + offset);
            sc.d2 = Position::new(s.x + along, s.y - offset);
        }
        SweepVariable::DistanceToIntersection => {
            let shift = x - base.source.x;
            sc.source = base.source.shifted_x(shift);
            sc.relay = base.relay.shifted_x(shift);
            sc.d1 = base.d1.shifted_x(shift);
            sc.d2 = base.d2.shifted_x(shift);
        }
        SweepVariable::RatePair => {
            sc.noma.rate1 = base.noma.rate1 * x / base.noma.rate2;
            sc.noma.rate2 = x;
        }
    }
    mix.apply(&mut sc);
    sc.validate()?;
    Ok(sc)
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::validation("grid", "empty grid"));
        }
        if self.grid.iter().any(|x| !x.is_finite()) || self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation("grid", "grid must be finite and strictly increasing"));
        }
        if self.series.is_empty() {
            return Err(Error::validation("series", "no series"));
        }
        if self.outputs.schemes.is_empty() || (self.outputs.kernels.is_empty() && !self.outputs.monte_carlo) {
            return Err(Error::validation("methods", "nothing to compute"));
        }
        if self.outputs.monte_carlo && self.trials == 0 {
            return Err(Error::validation("trials", "need at least one trial"));
        }
        for s in &self.series {
            for &x in &self.grid {
                scenario_at(self.variable, &s.base, s.mix, x)?;
            }
        }
        Ok(())
    }

    /// `# `-prefixed lines describing the sweep and each series' base
    /// configuration.
    pub fn header(&self) -> Vec<String> {
        let mut h = vec![
            format!("sweep = {}", self.name),
            format!("variable = {}", self.variable.as_str()),
            format!("grid = {}", self.grid.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
            format!(
                "methods = {}",
                self.outputs
                    .kernels
                    .iter()
                    .map(|k| k.as_str())
                    .chain(self.outputs.monte_carlo.then_some("mc"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            format!("schemes = {}", self.outputs.schemes.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")),
            format!("trials = {}", self.trials),
            format!("master_seed = {}", self.seed),
        ];
        h.extend(self.notes.iter().map(|n| format!("corrected default: {n}")));
        for s in &self.series {
            h.push(format!("series {} (interferers {})", s.label, s.mix.as_str()));
            let cfg = ScenarioConfig { scenario: s.base.clone(), ..Default::default() };
            for line in cfg.render().lines().take_while(|l| !l.starts_with("scheme")) {
                h.push(format!("  {line}"));
            }
        }
        h
    }
}

fn provenance(kernel: Kernel) -> Provenance {
    match kernel {
        Kernel::Paper => Provenance::AnalyticPaper,
        Kernel::Exact => Provenance::AnalyticExact,
    }
}

fn analytic_pair(sc: &Scenario, scheme: Scheme, kernel: Kernel) -> Result<[f64; 2]> {
    Ok(match scheme {
        Scheme::Noma => [outage_o1(sc, kernel)?, outage_o2(sc, kernel)?],
        Scheme::Oma => [outage_oma(sc, Destination::D1, kernel)?, outage_oma(sc, Destination::D2, kernel)?],
    })
}

/// Evaluates every requested output at every grid point, in grid order.
/// Every grid point reuses the master seed.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let mut rows = Vec::new();
    for series in &spec.series {
        for &x in &spec.grid {
            let sc = scenario_at(spec.variable, &series.base, series.mix, x)?;
            for &scheme in &spec.outputs.schemes {
                let mut push = |dest: Destination, method: Provenance, outage: f64, std_err: f64, trials: u64| {
                    rows.push(SweepRow {
                        series: series.label.clone(),
                        x,
                        scheme: scheme.as_str().to_string(),
                        destination: dest.as_str().to_string(),
                        method: method.as_str().to_string(),
                        outage,
                        std_err,
                        trials,
                    })
                };
                for &kernel in &spec.outputs.kernels {
                    let [a, b] = analytic_pair(&sc, scheme, kernel)?;
                    push(Destination::D1, provenance(kernel), a, 0.0, 0);
                    push(Destination::D2, provenance(kernel), b, 0.0, 0);
                }
                if spec.outputs.monte_carlo {
                    let rep = estimate(&sc, scheme, spec.trials, spec.seed)?;
                    push(Destination::D1, Provenance::MonteCarlo, rep.o1.p_hat, rep.o1.std_err, spec.trials);
                    push(Destination::D2, Provenance::MonteCarlo, rep.o2.p_hat, rep.o2.std_err, spec.trials);
                }
            }
        }
    }
    Ok(SweepTable { variable: spec.variable.as_str().to_string(), header: spec.header(), rows })
}

/// Presets for figures 2 to 5. `cfg` supplies everything the protocol
/// leaves open: the remaining parameters, kernels, trials and seed.
pub fn figure_preset(figure: u32, cfg: &ScenarioConfig, monte_carlo: bool) -> Result<SweepSpec> {
    let kernels = cfg.kernel.kernels();
    let outputs = |schemes: Vec<Scheme>| Outputs { kernels: kernels.clone(), monte_carlo, schemes };
    let series = |label: &str, base: Scenario, mix: InterfererMix| Series { label: label.to_string(), base, mix };
    let base = &cfg.scenario;
    let mixes = || {
        [InterfererMix::Mixed, InterfererMix::LosOnly, InterfererMix::NlosOnly]
            .into_iter()
            .map(|m| series(m.as_str(), base.clone(), m))
            .collect::<Vec<_>>()
    };
    let (variable, grid, series, outputs) = match figure {
        2 => {
            let with_a1 = |a1: f64| {
                let mut sc = base.clone();
                sc.noma.a1 = a1;
                sc.noma.a2 = 1.0 - a1;
                series(&format!("a1={a1}"), sc, InterfererMix::Mixed)
            };
            (
                SweepVariable::SourceDestinationDistance,
                linear_grid(40.0, 400.0, 10),
                vec![with_a1(0.8), with_a1(0.6)],
                outputs(vec![Scheme::Noma]),
            )
        }
        3 => (SweepVariable::LambdaCommon, log_grid(1e-4, 1e-2, 10), mixes(), outputs(vec![Scheme::Noma])),
        4 => {
            let with_rates = |r1: f64, r2: f64| {
                let mut sc = base.clone();
                sc.noma.a1 = 0.9;
                sc.noma.a2 = 1.0 - 0.9;
                sc.noma.rate1 = r1;
                sc.noma.rate2 = r2;
                series(&format!("rates={r1}/{r2}"), sc, InterfererMix::Mixed)
            };
            (
                SweepVariable::LambdaCommon,
                log_grid(1e-5, 5e-4, 10),
                vec![with_rates(0.25, 0.5), with_rates(1.2, 4.0)],
                outputs(vec![Scheme::Noma, Scheme::Oma]),
            )
        }
        5 => (
            SweepVariable::DistanceToIntersection,
            linear_grid(0.0, 450.0, 10),
            mixes(),
            outputs(vec![Scheme::Noma]),
        ),
        _ => return Err(Error::validation("figure", format!("expected 2, 3, 4 or 5, got {figure}"))),
    };
    let spec = SweepSpec {
        name: format!("figure {figure}"),
        variable,
        grid,
        series,
        outputs,
        trials: cfg.trials,
        seed: cfg.master_seed,
        notes: cfg.corrected_defaults.iter().map(|n| n.to_string()).collect(),
    };
    spec.validate()?;
    Ok(spec)
}

/// Sweep keys accepted on top of the scenario keys in a sweep file.
pub const SWEEP_KEYS: &[(&str, &str)] = &[
    ("variable", "lambda_common | source_destination_distance | distance_to_intersection | rate_pair"),
    ("grid", "explicit comma-separated grid"),
    ("grid_log", "`lo, hi, n`: n log-spaced points"),
    ("grid_linear", "`lo, hi, n`: n evenly spaced points"),
    ("mixes", "comma-separated interferer splits: mixed, los, nlos"),
    ("monte_carlo", "true | false"),
];

fn split_list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn grid_spec(key: &str, v: &str, log: bool) -> Result<Vec<f64>> {
    let parts = split_list(v);
    let bad = || Error::validation(key, format!("expected `lo, hi, n`, got `{v}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n == 0 || (log && !(lo > 0.0 && hi > 0.0)) {
        return Err(bad());
    }
    Ok(if log { log_grid(lo, hi, n) } else { linear_grid(lo, hi, n) })
}

/// A sweep file: the sweep keys above plus any scenario keys for the
/// base configuration.
pub fn parse_sweep_spec(text: &str) -> Result<SweepSpec> {
    let mut scenario_text = String::new();
    let mut variable = None;
    let mut grid = None;
    let mut mixes = vec![InterfererMix::Mixed];
    let mut monte_carlo = true;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let sweep_kv = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .filter(|(k, _)| SWEEP_KEYS.iter().any(|(s, _)| s == k));
        let Some((key, v)) = sweep_kv else {
            // keep line numbering intact for scenario-key errors
            scenario_text.push_str(raw);
            scenario_text.push('\n');
            continue;
        };
        scenario_text.push('\n');
        let dup = || Error::Parse { line: lineno + 1, reason: format!("duplicate grid key `{key}`") };
        match key {
            "variable" => {
                variable = Some(
                    SweepVariable::parse(v)
                        .ok_or_else(|| Error::validation(key, format!("unknown sweep variable `{v}`")))?,
                )
            }
            "grid" | "grid_log" | "grid_linear" => {
                if grid.is_some() {
                    return Err(dup());
                }
                grid = Some(match key {
                    "grid" => split_list(v)
                        .into_iter()
                        .map(|x| x.parse::<f64>().map_err(|_| Error::validation(key, format!("bad number `{x}`"))))
                        .collect::<Result<Vec<_>>>()?,
                    "grid_log" => grid_spec(key, v, true)?,
                    _ => grid_spec(key, v, false)?,
                });
            }
            "mixes" => {
                mixes = split_list(v)
                    .into_iter()
                    .map(|m| InterfererMix::parse(m).ok_or_else(|| Error::validation(key, format!("unknown mix `{m}`"))))
                    .collect::<Result<_>>()?
            }
            "monte_carlo" => {
                monte_carlo = v
                    .parse()
                    .map_err(|_| Error::validation(key, format!("expected true or false, got `{v}`")))?
            }
            _ => unreachable!(),
        }
    }
    let cfg = parse_config(&scenario_text)?;
    let variable = variable.ok_or_else(|| Error::validation("variable", "missing"))?;
    let grid = grid.ok_or_else(|| Error::validation("grid", "missing; give grid, grid_log or grid_linear"))?;
    let spec = SweepSpec {
        name: "custom".to_string(),
        variable,
        grid,
        series: mixes.into_iter().map(|m| Series { label: m.as_str().to_string(), base: cfg.scenario.clone(), mix: m }).collect(),
        outputs: Outputs { kernels: cfg.kernel.kernels(), monte_carlo, schemes: cfg.scheme.schemes() },
        trials: cfg.trials,
        seed: cfg.master_seed,
        notes: cfg.corrected_defaults.iter().map(|n| n.to_string()).collect(),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn load_sweep_spec(path: impl AsRef<Path>) -> Result<SweepSpec> {
    parse_sweep_spec(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = log_grid(1e-4, 1e-2, 10);
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[9], 1e-2);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!((g[1] / g[0] - 10f64.powf(2.0 / 9.0)).abs() < 1e-12);
        assert_eq!(linear_grid(0.0, 450.0, 10)[3], 150.0);
    }

    #[test]
    fn distance_sweep_geometry() {
        let base = Scenario::default();
        let sc = scenario_at(SweepVariable::SourceDestinationDistance, &base, InterfererMix::Mixed, 200.0).unwrap();
        assert!((crate::geometry::distance(sc.source, sc.d1) - 200.0).abs() < 1e-12);
        assert!((crate::geometry::distance(sc.source, sc.d2) - 200.0).abs() < 1e-12);
        assert!((sc.relay.x - 0.5 * sc.d1.x).abs() < 1e-12);
        assert_eq!(sc.d1.y, 10.0);
        assert_eq!(sc.d2.y, -10.0);
        assert!(scenario_at(SweepVariable::SourceDestinationDistance, &base, InterfererMix::Mixed, 10.0).is_err());
    }

    #[test]
    fn translation_keeps_link_lengths() {
        let base = Scenario::default();
        let sc = scenario_at(SweepVariable::DistanceToIntersection, &base, InterfererMix::Mixed, 300.0).unwrap();
        assert_eq!(sc.source, Position::new(300.0, 0.0));
        assert_eq!(sc.d2, Position::new(400.0, -10.0));
        for rx in [crate::scenario::Receiver::Relay, crate::scenario::Receiver::D1, crate::scenario::Receiver::D2] {
            assert!((sc.link_length(rx) - base.link_length(rx)).abs() < 1e-12);
        }
    }

    #[test]
    fn mixes_keep_road_totals() {
        let base = Scenario::default().with_lambda(2e-3);
        for mix in [InterfererMix::LosOnly, InterfererMix::NlosOnly] {
            let sc = scenario_at(SweepVariable::LambdaCommon, &base, mix, 1e-3).unwrap();
            for road in Road::ALL {
                let l = sc.ppp.intensity(road, LinkClass::Los);
                let n = sc.ppp.intensity(road, LinkClass::Nlos);
                assert_eq!(l + n, 2e-3);
                assert_eq!(l == 0.0, mix == InterfererMix::NlosOnly);
            }
        }
    }

    #[test]
    fn rate_pair_keeps_ratio() {
        let base = Scenario::default();
        let sc = scenario_at(SweepVariable::RatePair, &base, InterfererMix::Mixed, 2.0).unwrap();
        assert_eq!(sc.noma.rate2, 2.0);
        assert_eq!(sc.noma.rate1, base.noma.rate1 * 2.0 / base.noma.rate2);
    }

    #[test]
    fn grid_must_increase() {
        let mut spec = figure_preset(3, &ScenarioConfig::default(), false).unwrap();
        spec.grid = vec![1e-3, 1e-3];
        assert!(spec.validate().is_err());
        spec.grid.clear();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn unknown_figure() {
        assert!(figure_preset(1, &ScenarioConfig::default(), false).is_err());
    }

    #[test]
    fn sweep_file() {
        let spec = parse_sweep_spec(
            "variable = lambda_common\ngrid_log = 1e-4, 1e-2, 5\nmixes = mixed, nlos\nscheme = both\nkernel = both\ntrials = 10\nmonte_carlo = false\n",
        )
        .unwrap();
        assert_eq!(spec.grid.len(), 5);
        assert_eq!(spec.series.len(), 2);
        assert_eq!(spec.outputs.schemes, vec![Scheme::Noma, Scheme::Oma]);
        assert_eq!(spec.outputs.kernels, vec![Kernel::Paper, Kernel::Exact]);
        assert!(!spec.outputs.monte_carlo);
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.rows.len(), 2 * 5 * 2 * 2 * 2);

        let err = parse_sweep_spec("variable = lambda_common\ngrid = 1, 2\nbogus = 3").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(parse_sweep_spec("grid = 1e-3").is_err());
    }
}
