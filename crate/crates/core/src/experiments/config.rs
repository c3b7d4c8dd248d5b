//! Flat `key = value` scenario files.
//!
//! Blank lines and `#` comments are ignored. Positions are written `x, y`.
//! Omitted keys keep their defaults; see [`KEYS`] for the full schema.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::analytic::{Kernel, Scheme};
use crate::channel::{integer_nakagami, LinkClass};
use crate::error::{Error, Result};
use crate::geometry::{Position, Road};
use crate::pointprocess::PROCESSES;
use crate::scenario::{LinkMode, Scenario};

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 42;

/// Every accepted key with a one-line description.
pub const KEYS: &[(&str, &str)] = &[
    ("s", "source position, `x, y` meters"),
    ("r", "relay position"),
    ("d1", "position of D1"),
    ("d2", "position of D2"),
    ("a1", "power share of D1; a2 defaults to 1 - a1"),
    ("a2", "power share of D2"),
    ("rate1", "target rate of D1, bits/s/Hz"),
    ("rate2", "target rate of D2, bits/s/Hz"),
    ("alpha_los", "LOS path-loss exponent"),
    ("alpha_nlos", "NLOS path-loss exponent"),
    ("m_los", "Nakagami parameter of LOS links (integer)"),
    ("m_nlos", "Nakagami parameter of NLOS links (integer)"),
    ("mu", "average received power"),
    ("beta", "blockage rate, 1/m"),
    ("g_max", "main-lobe gain, linear"),
    ("g_min", "side-lobe gain, linear"),
    ("g_max_dbi", "main-lobe gain, dBi"),
    ("g_min_dbi", "side-lobe gain, dBi"),
    ("phi", "half-power beamwidth, radians"),
    ("carrier_freq", "carrier frequency, Hz"),
    ("lambda", "sets all four interferer intensities, 1/m"),
    ("lambda_x_los", "intensity of LOS interferers on the X road"),
    ("lambda_x_nlos", "intensity of NLOS interferers on the X road"),
    ("lambda_y_los", "intensity of LOS interferers on the Y road"),
    ("lambda_y_nlos", "intensity of NLOS interferers on the Y road"),
    ("p", "ALOHA access probability"),
    ("window", "minimum simulated half-width of each road, meters"),
    ("link_mode", "blockage | los | nlos: class of the S-R and R-D links"),
    ("scheme", "noma | oma | both"),
    ("trials", "Monte Carlo trials"),
    ("master_seed", "Monte Carlo master seed"),
    ("kernel", "paper | exact | both"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchemeChoice {
    #[default]
    Noma,
    Oma,
    Both,
}

impl SchemeChoice {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeChoice::Noma => vec![Scheme::Noma],
            SchemeChoice::Oma => vec![Scheme::Oma],
            SchemeChoice::Both => vec![Scheme::Noma, Scheme::Oma],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeChoice::Noma => "noma",
            SchemeChoice::Oma => "oma",
            SchemeChoice::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "noma" => Some(SchemeChoice::Noma),
            "oma" => Some(SchemeChoice::Oma),
            "both" => Some(SchemeChoice::Both),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelChoice {
    Paper,
    #[default]
    Exact,
    Both,
}

impl KernelChoice {
    pub fn kernels(self) -> Vec<Kernel> {
        match self {
            KernelChoice::Paper => vec![Kernel::Paper],
            KernelChoice::Exact => vec![Kernel::Exact],
            KernelChoice::Both => vec![Kernel::Paper, Kernel::Exact],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            KernelChoice::Paper => "paper",
            KernelChoice::Exact => "exact",
            KernelChoice::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper" => Some(KernelChoice::Paper),
            "exact" => Some(KernelChoice::Exact),
            "both" => Some(KernelChoice::Both),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub scheme: SchemeChoice,
    pub trials: u64,
    pub master_seed: u64,
    pub kernel: KernelChoice,
    /// Notes on corrected defaults still in effect, one per key left unset.
    pub corrected_defaults: Vec<&'static str>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::default(),
            scheme: SchemeChoice::default(),
            trials: DEFAULT_TRIALS,
            master_seed: DEFAULT_SEED,
            kernel: KernelChoice::default(),
            corrected_defaults: vec![CORRECTED_BETA, CORRECTED_CARRIER],
        }
    }
}

const CORRECTED_BETA: &str = "beta = 9.5e-3 per meter (a rate of 9.5e3 would leave no LOS link)";
const CORRECTED_CARRIER: &str = "carrier_freq = 30e9 Hz (the 30 GHz figure is a frequency, not a wavelength)";

pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::validation(key, format!("expected a number, got `{v}`")))
}

fn parse_u64(key: &str, v: &str) -> Result<u64> {
    v.parse::<u64>()
        .map_err(|_| Error::validation(key, format!("expected a non-negative integer, got `{v}`")))
}

fn parse_position(key: &str, v: &str) -> Result<Position> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::validation(key, format!("expected `x, y`, got `{v}`")));
    }
    Ok(Position::new(parse_f64(key, parts[0])?, parse_f64(key, parts[1])?))
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::default();
    let mut seen = HashSet::new();
    let (mut a1, mut a2) = (None, None);
    let sc = &mut cfg.scenario;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse { line: lineno + 1, reason: format!("expected `key = value`, got `{line}`") });
        };
        let (key, v) = (key.trim(), value.trim());
        if !KEYS.iter().any(|(k, _)| *k == key) {
            return Err(Error::Parse { line: lineno + 1, reason: format!("unknown key `{key}`") });
        }
        if !seen.insert(key.to_string()) {
            return Err(Error::Parse { line: lineno + 1, reason: format!("duplicate key `{key}`") });
        }
        match key {
            "s" => sc.source = parse_position(key, v)?,
            "r" => sc.relay = parse_position(key, v)?,
            "d1" => sc.d1 = parse_position(key, v)?,
            "d2" => sc.d2 = parse_position(key, v)?,
            "a1" => a1 = Some(parse_f64(key, v)?),
            "a2" => a2 = Some(parse_f64(key, v)?),
            "rate1" => sc.noma.rate1 = parse_f64(key, v)?,
            "rate2" => sc.noma.rate2 = parse_f64(key, v)?,
            "alpha_los" => sc.path_loss.alpha_los = parse_f64(key, v)?,
            "alpha_nlos" => sc.path_loss.alpha_nlos = parse_f64(key, v)?,
            "m_los" => sc.fading.m_los = integer_nakagami(key, parse_f64(key, v)?)?,
            "m_nlos" => sc.fading.m_nlos = integer_nakagami(key, parse_f64(key, v)?)?,
            "mu" => sc.fading.mu = parse_f64(key, v)?,
            "beta" => {
                sc.blockage.beta = parse_f64(key, v)?;
                cfg.corrected_defaults.retain(|c| *c != CORRECTED_BETA);
            }
            "g_max" => sc.beam.g_max = parse_f64(key, v)?,
            "g_min" => sc.beam.g_min = parse_f64(key, v)?,
            "g_max_dbi" => sc.beam.g_max = db_to_linear(parse_f64(key, v)?),
            "g_min_dbi" => sc.beam.g_min = db_to_linear(parse_f64(key, v)?),
            "phi" => sc.beam.phi = parse_f64(key, v)?,
            "carrier_freq" => {
                sc.beam.carrier_freq = parse_f64(key, v)?;
                cfg.corrected_defaults.retain(|c| *c != CORRECTED_CARRIER);
            }
            "lambda" => {
                let l = parse_f64(key, v)?;
                for (road, class) in PROCESSES {
                    sc.ppp.set_intensity(road, class, l);
                }
            }
            "lambda_x_los" => sc.ppp.set_intensity(Road::X, LinkClass::Los, parse_f64(key, v)?),
            "lambda_x_nlos" => sc.ppp.set_intensity(Road::X, LinkClass::Nlos, parse_f64(key, v)?),
            "lambda_y_los" => sc.ppp.set_intensity(Road::Y, LinkClass::Los, parse_f64(key, v)?),
            "lambda_y_nlos" => sc.ppp.set_intensity(Road::Y, LinkClass::Nlos, parse_f64(key, v)?),
            "p" => sc.ppp.p = parse_f64(key, v)?,
            "window" => sc.ppp.window = parse_f64(key, v)?,
            "link_mode" => {
                sc.link_mode = match v {
                    "blockage" => LinkMode::Blockage,
                    "los" => LinkMode::ForceLos,
                    "nlos" => LinkMode::ForceNlos,
                    _ => return Err(Error::validation(key, format!("expected blockage, los or nlos, got `{v}`"))),
                }
            }
            "scheme" => {
                cfg.scheme = SchemeChoice::parse(v)
                    .ok_or_else(|| Error::validation(key, format!("expected noma, oma or both, got `{v}`")))?
            }
            "kernel" => {
                cfg.kernel = KernelChoice::parse(v)
                    .ok_or_else(|| Error::validation(key, format!("expected paper, exact or both, got `{v}`")))?
            }
            "trials" => cfg.trials = parse_u64(key, v)?,
            "master_seed" => cfg.master_seed = parse_u64(key, v)?,
            _ => unreachable!("key list and match arms disagree on `{key}`"),
        }
    }
    if seen.contains("lambda") {
        for key in ["lambda_x_los", "lambda_x_nlos", "lambda_y_los", "lambda_y_nlos"] {
            if seen.contains(key) {
                return Err(Error::validation(key, "conflicts with `lambda`"));
            }
        }
    }
    if seen.contains("g_max") && seen.contains("g_max_dbi") {
        return Err(Error::validation("g_max_dbi", "conflicts with `g_max`"));
    }
    if seen.contains("g_min") && seen.contains("g_min_dbi") {
        return Err(Error::validation("g_min_dbi", "conflicts with `g_min`"));
    }

    let noma = &mut cfg.scenario.noma;
    match (a1, a2) {
        (Some(x), None) => (noma.a1, noma.a2) = (x, 1.0 - x),
        (None, Some(y)) => (noma.a1, noma.a2) = (1.0 - y, y),
        (Some(x), Some(y)) => (noma.a1, noma.a2) = (x, y),
        (None, None) => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.trials == 0 {
            return Err(Error::validation("trials", "need at least one trial"));
        }
        Ok(())
    }

    /// The resolved configuration as a config file; parses back to `self`.
    pub fn render(&self) -> String {
        let sc = &self.scenario;
        let pos = |p: Position| format!("{}, {}", p.x, p.y);
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("s", pos(sc.source));
        line("r", pos(sc.relay));
        line("d1", pos(sc.d1));
        line("d2", pos(sc.d2));
        line("a1", sc.noma.a1.to_string());
        line("a2", sc.noma.a2.to_string());
        line("rate1", sc.noma.rate1.to_string());
        line("rate2", sc.noma.rate2.to_string());
        line("alpha_los", sc.path_loss.alpha_los.to_string());
        line("alpha_nlos", sc.path_loss.alpha_nlos.to_string());
        line("m_los", sc.fading.m_los.to_string());
        line("m_nlos", sc.fading.m_nlos.to_string());
        line("mu", sc.fading.mu.to_string());
        line("beta", sc.blockage.beta.to_string());
        line("g_max", sc.beam.g_max.to_string());
        line("g_min", sc.beam.g_min.to_string());
        line("phi", sc.beam.phi.to_string());
        line("carrier_freq", sc.beam.carrier_freq.to_string());
        line("lambda_x_los", sc.ppp.lambda_x_los.to_string());
        line("lambda_x_nlos", sc.ppp.lambda_x_nlos.to_string());
        line("lambda_y_los", sc.ppp.lambda_y_los.to_string());
        line("lambda_y_nlos", sc.ppp.lambda_y_nlos.to_string());
        line("p", sc.ppp.p.to_string());
        line("window", sc.ppp.window.to_string());
        line("link_mode", sc.link_mode.as_str().to_string());
        line("scheme", self.scheme.as_str().to_string());
        line("trials", self.trials.to_string());
        line("master_seed", self.master_seed.to_string());
        line("kernel", self.kernel.as_str().to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.corrected_defaults.len(), 2);
        let cfg = parse_config("# nothing\n\n   \n").unwrap();
        assert_eq!(cfg.scenario, Scenario::default());
    }

    #[test]
    fn power_split_closure() {
        let cfg = parse_config("a1 = 0.6").unwrap();
        assert_eq!(cfg.scenario.noma.a1, 0.6);
        assert_eq!(cfg.scenario.noma.a2, 1.0 - 0.6);
        let err = parse_config("a1 = 0.6\na2 = 0.3").unwrap_err().to_string();
        assert!(err.contains("a2"), "{err}");
    }

    #[test]
    fn non_integer_nakagami_rejected() {
        let err = parse_config("m_los = 1.5").unwrap_err();
        assert!(matches!(err, Error::Validation { ref key, .. } if key == "m_los"));
        assert!(err.to_string().contains("integer Nakagami parameter required"));
    }

    #[test]
    fn invalid_values_name_their_key() {
        for (text, key) in [
            ("alpha_los = 1", "alpha_los"),
            ("p = 1.5", "p"),
            ("lambda = -1", "lambda_x_los"),
            ("rate1 = 0", "rate1"),
            ("trials = 0", "trials"),
            ("mu = x", "mu"),
            ("d1 = 3", "d1"),
        ] {
            let err = parse_config(text).unwrap_err().to_string();
            assert!(err.contains(key), "{text}: {err}");
        }
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_config("a1 = 0.8\nbogus = 1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(matches!(parse_config("a1 0.8").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(matches!(parse_config("a1 = 0.8\na1 = 0.9").unwrap_err(), Error::Parse { line: 2, .. }));
    }

    #[test]
    fn overrides_apply() {
        let cfg = parse_config("lambda = 0.002\nbeta = 9500\ng_max_dbi = 20\nd2 = 100, -20\nlink_mode = nlos\nscheme = both").unwrap();
        let sc = &cfg.scenario;
        assert_eq!(sc.ppp.lambda_y_nlos, 0.002);
        assert_eq!(sc.blockage.beta, 9500.0);
        assert!((sc.beam.g_max - 100.0).abs() < 1e-12);
        assert_eq!(sc.d2, Position::new(100.0, -20.0));
        assert_eq!(sc.link_mode, LinkMode::ForceNlos);
        assert_eq!(cfg.scheme, SchemeChoice::Both);
        assert_eq!(cfg.corrected_defaults, vec![CORRECTED_CARRIER]);
    }

    #[test]
    fn render_round_trips() {
        let mut cfg = parse_config("lambda_x_los = 0.00123\na1 = 0.7\nwindow = 2500.5\nkernel = both\nmaster_seed = 7").unwrap();
        cfg.corrected_defaults.clear();
        let back = parse_config(&cfg.render()).unwrap();
        assert_eq!(back, cfg);
    }
}
