//! Line-oriented run configuration.
//!
//! The format is deliberately flat: one `section.key = value` assignment per
//! line, `#` starts a comment, values are whitespace-separated tokens. The
//! only repeatable keys are `atom_a.transition` and `atom_b.transition`.
//!
//! ```text
//! units.system = natural            # or: cgs (requires units.length_cm)
//! atom_a.transition = 1.0 1.0       # wavenumber, squared dipole moment
//! atom_a.gamma = 1e-3
//! bath.temperature = 0.05           # 0 selects the zero-temperature vacuum
//! geometry.kind = free              # or: wall
//! geometry.separation = 25          # free mode
//! sweep.variable = separation       # separation | scale | temperature
//! sweep.start = 20
//! sweep.stop = 100
//! sweep.points = 16
//! sweep.spacing = log               # log | linear
//! method.choice = auto              # auto | full | asymptotic | all
//! quadrature.rel_tol = 1e-8
//! ```
//!
//! Wall mode replaces `geometry.separation` with `geometry.atom_a = x y z`
//! and `geometry.atom_b = x y z` (wall in the z = 0 plane, atoms above it).
//! All dimensional values are read in the configured unit system: natural
//! units throughout, or gaussian-cgs (lengths in cm, wavenumbers in 1/cm,
//! squared dipoles in erg·cm³, temperatures in K) with `units.length_cm`
//! fixing the natural length unit.

use casimir_polder::atom::{AtomModel, Transition};
use casimir_polder::geometry::Vec3;
use casimir_polder::units::UnitSystem;

/// Fatal CLI failure, carrying the process exit code contract:
/// configuration errors exit 2, numerical failures exit 3, self-test
/// failures exit 4.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Selftest(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Selftest(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::Selftest(m) => m,
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Separation,
    Scale,
    Temperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    /// The i-th grid value; endpoints land exactly on `start`/`stop`.
    pub fn value(&self, i: usize) -> f64 {
        if i == 0 {
            return self.start;
        }
        if i + 1 == self.points {
            return self.stop;
        }
        let f = i as f64 / (self.points - 1) as f64;
        match self.spacing {
            Spacing::Log => self.start * (self.stop / self.start).powf(f),
            Spacing::Linear => self.start + (self.stop - self.start) * f,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Geometry {
    Free { separation: Option<f64> },
    Wall { atom_a: Vec3, atom_b: Vec3 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSelector {
    Auto,
    Full,
    Asymptotic,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitsChoice {
    Natural,
    Cgs,
}

/// Fully validated run configuration in natural internal units.
#[derive(Debug)]
pub struct RunConfig {
    pub units: UnitSystem,
    pub atom_a: AtomModel,
    pub atom_b: AtomModel,
    /// Bath temperature in natural units; `None` when the temperature is the
    /// sweep variable.
    pub temperature: Option<f64>,
    pub geometry: Geometry,
    pub sweep: Option<SweepSpec>,
    pub method: MethodSelector,
    pub rel_tol: Option<f64>,
}

/// One `section.key = value` assignment with its source line number.
struct Assignment<'a> {
    line: usize,
    section: &'a str,
    key: &'a str,
    value: &'a str,
}

fn split_assignments(text: &str) -> Result<Vec<Assignment<'_>>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let (key_part, value) = body
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {line}: expected `section.key = value`")))?;
        let key_part = key_part.trim();
        let value = value.trim();
        let (section, key) = key_part.split_once('.').ok_or_else(|| {
            config_err(format!(
                "line {line}: key `{key_part}` is missing its section prefix"
            ))
        })?;
        if value.is_empty() {
            return Err(config_err(format!("line {line}: key `{key_part}` has no value")));
        }
        out.push(Assignment { line, section, key, value });
    }
    Ok(out)
}

fn parse_f64(a: &Assignment<'_>) -> Result<f64, CliError> {
    a.value.parse::<f64>().map_err(|_| {
        config_err(format!(
            "line {}: cannot parse `{}` as a number for {}.{}",
            a.line, a.value, a.section, a.key
        ))
    })
}

fn parse_usize(a: &Assignment<'_>) -> Result<usize, CliError> {
    a.value.parse::<usize>().map_err(|_| {
        config_err(format!(
            "line {}: cannot parse `{}` as an integer for {}.{}",
            a.line, a.value, a.section, a.key
        ))
    })
}

fn parse_numbers(a: &Assignment<'_>, n: usize) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = a.value.split_whitespace().collect();
    if parts.len() != n {
        return Err(config_err(format!(
            "line {}: {}.{} expects {} numbers, got {}",
            a.line, a.section, a.key, n, parts.len()
        )));
    }
    parts
        .iter()
        .map(|s| {
            s.parse::<f64>().map_err(|_| {
                config_err(format!(
                    "line {}: cannot parse `{s}` in {}.{}",
                    a.line, a.section, a.key
                ))
            })
        })
        .collect()
}

/// Raw per-atom accumulator before unit conversion.
#[derive(Default)]
struct AtomBlock {
    transitions: Vec<[f64; 2]>,
    gamma: Option<f64>,
}

impl AtomBlock {
    fn is_empty(&self) -> bool {
        self.transitions.is_empty() && self.gamma.is_none()
    }

    fn build(&self, units: &UnitSystem, name: &str) -> Result<AtomModel, CliError> {
        if self.transitions.is_empty() {
            return Err(config_err(format!(
                "{name} block is missing: at least one `{name}.transition = k0 mu2` line is required"
            )));
        }
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition {
                k0: units.wavenumber_in(t[0]),
                mu2: units.dipole_squared_in(t[1]),
            })
            .collect();
        let gamma = units.wavenumber_in(self.gamma.unwrap_or(0.0));
        AtomModel::new(transitions, gamma)
            .map_err(|e| config_err(format!("{name} block is invalid: {e}")))
    }
}

/// Parse and validate a configuration file body. `units_override` comes from
/// the `--units` flag and wins over `units.system`.
pub fn parse(text: &str, units_override: Option<UnitsChoice>) -> Result<RunConfig, CliError> {
    let assignments = split_assignments(text)?;

    let mut units_system: Option<(usize, UnitsChoice)> = None;
    let mut length_cm: Option<f64> = None;
    let mut atom_a = AtomBlock::default();
    let mut atom_b = AtomBlock::default();
    let mut temperature: Option<f64> = None;
    let mut geometry_kind: Option<(usize, &str)> = None;
    let mut separation: Option<f64> = None;
    let mut wall_a: Option<Vec3> = None;
    let mut wall_b: Option<Vec3> = None;
    let mut sweep_variable: Option<(usize, &str)> = None;
    let mut sweep_start: Option<f64> = None;
    let mut sweep_stop: Option<f64> = None;
    let mut sweep_points: Option<usize> = None;
    let mut sweep_spacing: Option<(usize, &str)> = None;
    let mut method: Option<(usize, &str)> = None;
    let mut rel_tol: Option<f64> = None;

    for a in &assignments {
        match (a.section, a.key) {
            ("units", "system") => {
                let choice = match a.value {
                    "natural" => UnitsChoice::Natural,
                    "cgs" => UnitsChoice::Cgs,
                    other => {
                        return Err(config_err(format!(
                            "line {}: units.system must be `natural` or `cgs`, got `{other}`",
                            a.line
                        )))
                    }
                };
                units_system = Some((a.line, choice));
            }
            ("units", "length_cm") => length_cm = Some(parse_f64(a)?),
            ("atom_a", "transition") => {
                let v = parse_numbers(a, 2)?;
                atom_a.transitions.push([v[0], v[1]]);
            }
            ("atom_a", "gamma") => atom_a.gamma = Some(parse_f64(a)?),
            ("atom_b", "transition") => {
                let v = parse_numbers(a, 2)?;
                atom_b.transitions.push([v[0], v[1]]);
            }
            ("atom_b", "gamma") => atom_b.gamma = Some(parse_f64(a)?),
            ("bath", "temperature") => temperature = Some(parse_f64(a)?),
            ("geometry", "kind") => geometry_kind = Some((a.line, a.value)),
            ("geometry", "separation") => separation = Some(parse_f64(a)?),
            ("geometry", "atom_a") => {
                let v = parse_numbers(a, 3)?;
                wall_a = Some([v[0], v[1], v[2]]);
            }
            ("geometry", "atom_b") => {
                let v = parse_numbers(a, 3)?;
                wall_b = Some([v[0], v[1], v[2]]);
            }
            ("sweep", "variable") => sweep_variable = Some((a.line, a.value)),
            ("sweep", "start") => sweep_start = Some(parse_f64(a)?),
            ("sweep", "stop") => sweep_stop = Some(parse_f64(a)?),
            ("sweep", "points") => sweep_points = Some(parse_usize(a)?),
            ("sweep", "spacing") => sweep_spacing = Some((a.line, a.value)),
            ("method", "choice") => method = Some((a.line, a.value)),
            ("quadrature", "rel_tol") => rel_tol = Some(parse_f64(a)?),
            _ => {
                return Err(config_err(format!(
                    "line {}: unknown key `{}.{}`",
                    a.line, a.section, a.key
                )))
            }
        }
    }

    let units_choice = units_override
        .or(units_system.map(|(_, c)| c))
        .unwrap_or(UnitsChoice::Natural);
    let units = match units_choice {
        UnitsChoice::Natural => UnitSystem::natural(),
        UnitsChoice::Cgs => {
            let l = length_cm.ok_or_else(|| {
                config_err("units.system = cgs requires units.length_cm".to_string())
            })?;
            UnitSystem::gaussian_cgs(l)
                .map_err(|e| config_err(format!("units.length_cm is invalid: {e}")))?
        }
    };

    let atom_a_model = atom_a.build(&units, "atom_a")?;
    let atom_b_model = if atom_b.is_empty() {
        atom_a_model.clone()
    } else {
        atom_b.build(&units, "atom_b")?
    };

    let geometry = match geometry_kind {
        None => return Err(config_err("geometry.kind is required (`free` or `wall`)".to_string())),
        Some((line, "free")) => {
            if wall_a.is_some() || wall_b.is_some() {
                return Err(config_err(format!(
                    "line {line}: geometry.kind = free does not take geometry.atom_a/atom_b positions"
                )));
            }
            Geometry::Free { separation: separation.map(|s| units.length_in(s)) }
        }
        Some((line, "wall")) => {
            if separation.is_some() {
                return Err(config_err(format!(
                    "line {line}: geometry.kind = wall takes atom positions, not geometry.separation"
                )));
            }
            let (a, b) = match (wall_a, wall_b) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(config_err(
                        "wall geometry requires both geometry.atom_a and geometry.atom_b positions"
                            .to_string(),
                    ))
                }
            };
            let conv = |p: Vec3| [units.length_in(p[0]), units.length_in(p[1]), units.length_in(p[2])];
            Geometry::Wall { atom_a: conv(a), atom_b: conv(b) }
        }
        Some((line, other)) => {
            return Err(config_err(format!(
                "line {line}: geometry.kind must be `free` or `wall`, got `{other}`"
            )))
        }
    };

    let sweep = match (sweep_variable, sweep_start, sweep_stop, sweep_points) {
        (None, None, None, None) => {
            if sweep_spacing.is_some() {
                return Err(config_err(
                    "sweep.spacing given without the rest of the sweep block".to_string(),
                ));
            }
            None
        }
        (Some((line, var)), Some(start), Some(stop), Some(points)) => {
            let variable = match var {
                "separation" => SweepVariable::Separation,
                "scale" => SweepVariable::Scale,
                "temperature" => SweepVariable::Temperature,
                other => {
                    return Err(config_err(format!(
                        "line {line}: sweep.variable must be separation, scale, or temperature, got `{other}`"
                    )))
                }
            };
            let spacing = match sweep_spacing {
                None => Spacing::Log,
                Some((_, "log")) => Spacing::Log,
                Some((_, "linear")) => Spacing::Linear,
                Some((sline, other)) => {
                    return Err(config_err(format!(
                        "line {sline}: sweep.spacing must be `log` or `linear`, got `{other}`"
                    )))
                }
            };
            if points < 2 {
                return Err(config_err(format!(
                    "sweep.points must be at least 2, got {points}"
                )));
            }
            if !(start > 0.0 && stop > 0.0 && start.is_finite() && stop.is_finite()) {
                return Err(config_err(format!(
                    "sweep bounds must be positive and finite, got start = {start}, stop = {stop}"
                )));
            }
            if start >= stop {
                return Err(config_err(format!(
                    "sweep.start must be below sweep.stop, got {start} >= {stop}"
                )));
            }
            // Convert dimensional sweep bounds; `scale` is a pure multiplier.
            let (start, stop) = match variable {
                SweepVariable::Separation => (units.length_in(start), units.length_in(stop)),
                SweepVariable::Temperature => (units.temperature_in(start), units.temperature_in(stop)),
                SweepVariable::Scale => (start, stop),
            };
            match (variable, &geometry) {
                (SweepVariable::Separation, Geometry::Wall { .. }) => {
                    return Err(config_err(
                        "sweep.variable = separation needs free-space geometry; use `scale` to dilate a wall configuration".to_string(),
                    ))
                }
                (SweepVariable::Scale, Geometry::Free { .. }) => {
                    return Err(config_err(
                        "sweep.variable = scale needs wall geometry; use `separation` in free space".to_string(),
                    ))
                }
                _ => {}
            }
            Some(SweepSpec { variable, start, stop, points, spacing })
        }
        _ => {
            return Err(config_err(
                "incomplete sweep block: variable, start, stop, and points are all required"
                    .to_string(),
            ))
        }
    };

    // A fixed temperature is required unless temperature is swept.
    let temperature = match (&sweep, temperature) {
        (Some(s), Some(_)) if s.variable == SweepVariable::Temperature => {
            return Err(config_err(
                "bath.temperature conflicts with sweep.variable = temperature".to_string(),
            ))
        }
        (Some(s), None) if s.variable == SweepVariable::Temperature => None,
        (_, Some(t)) => {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(config_err(format!(
                    "bath.temperature must be ≥ 0 and finite, got {t}"
                )));
            }
            Some(units.temperature_in(t))
        }
        (_, None) => {
            return Err(config_err("bath.temperature is required".to_string()));
        }
    };

    // Free-space geometry must pin the separation unless it is swept.
    if let Geometry::Free { separation } = &geometry {
        let swept = matches!(
            &sweep,
            Some(s) if s.variable == SweepVariable::Separation
        );
        if separation.is_none() && !swept {
            return Err(config_err(
                "free-space geometry requires geometry.separation (or a separation sweep)"
                    .to_string(),
            ));
        }
    }

    let method = match method {
        None => MethodSelector::Auto,
        Some((_, "auto")) => MethodSelector::Auto,
        Some((_, "full")) => MethodSelector::Full,
        Some((_, "asymptotic")) => MethodSelector::Asymptotic,
        Some((_, "all")) => MethodSelector::All,
        Some((line, other)) => {
            return Err(config_err(format!(
                "line {line}: method.choice must be auto, full, asymptotic, or all, got `{other}`"
            )))
        }
    };

    if let Some(tol) = rel_tol {
        if !(tol > 0.0 && tol < 0.1) {
            return Err(config_err(format!(
                "quadrature.rel_tol must be in (0, 0.1), got {tol}"
            )));
        }
    }

    Ok(RunConfig {
        units,
        atom_a: atom_a_model,
        atom_b: atom_b_model,
        temperature,
        geometry,
        sweep,
        method,
        rel_tol,
    })
}
