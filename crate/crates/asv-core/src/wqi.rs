//! Water-quality-index classification against the Malaysian class table:
//! per-parameter class assignment, worst-of aggregation, and the pH
//! safe-range check. Thresholds ship exactly as printed in the reference
//! table; dash cells are "unspecified" and are skipped rather than
//! invented.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// Parameters the class table covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Parameter {
    AmmoniacalNitrogen,
    Bod,
    Cod,
    DissolvedOxygen,
    Ph,
    Color,
    ElectricalConductivity,
}

impl Parameter {
    pub const ALL: [Parameter; 7] = [
        Parameter::AmmoniacalNitrogen,
        Parameter::Bod,
        Parameter::Cod,
        Parameter::DissolvedOxygen,
        Parameter::Ph,
        Parameter::Color,
        Parameter::ElectricalConductivity,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Parameter::AmmoniacalNitrogen => "ammoniacal_nitrogen",
            Parameter::Bod => "bod",
            Parameter::Cod => "cod",
            Parameter::DissolvedOxygen => "do",
            Parameter::Ph => "ph",
            Parameter::Color => "color",
            Parameter::ElectricalConductivity => "ec",
        }
    }

    pub fn unit(&self) -> &'static str {
        match self {
            Parameter::AmmoniacalNitrogen | Parameter::Bod | Parameter::Cod => "mg/l",
            Parameter::DissolvedOxygen => "mg/l",
            Parameter::Ph => "pH",
            Parameter::Color => "TUC",
            Parameter::ElectricalConductivity => "uS/cm",
        }
    }

    pub fn parse(key: &str) -> Option<Self> {
        match key {
            "ammoniacal_nitrogen" | "an" => Some(Parameter::AmmoniacalNitrogen),
            "bod" => Some(Parameter::Bod),
            "cod" => Some(Parameter::Cod),
            "do" => Some(Parameter::DissolvedOxygen),
            "ph" => Some(Parameter::Ph),
            "color" => Some(Parameter::Color),
            "ec" => Some(Parameter::ElectricalConductivity),
            _ => None,
        }
    }

    /// Dissolved oxygen is better when higher; every other parameter is
    /// worse when higher.
    pub fn higher_is_better(&self) -> bool {
        matches!(self, Parameter::DissolvedOxygen)
    }
}

/// Water classes, best to worst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WqiClass {
    I,
    IIA,
    IIB,
    III,
    IV,
    V,
}

impl WqiClass {
    pub const ALL: [WqiClass; 6] = [
        WqiClass::I,
        WqiClass::IIA,
        WqiClass::IIB,
        WqiClass::III,
        WqiClass::IV,
        WqiClass::V,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            WqiClass::I => "I",
            WqiClass::IIA => "IIA",
            WqiClass::IIB => "IIB",
            WqiClass::III => "III",
            WqiClass::IV => "IV",
            WqiClass::V => "V",
        }
    }
}

/// One table cell: the criterion a value must satisfy to earn the class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellBound {
    /// Dash in the table; the class is not classifiable for this
    /// parameter.
    Unspecified,
    /// value <= x (worse-is-higher parameters).
    Max(f64),
    /// value > x (open-ended worst class).
    GreaterThan(f64),
    /// lo <= value <= hi.
    Range(f64, f64),
    /// value >= x (better-is-higher parameters).
    Min(f64),
    /// value < x (better-is-higher parameters, low tail).
    LessThan(f64),
}

impl CellBound {
    pub fn satisfied_by(&self, value: f64) -> bool {
        match *self {
            CellBound::Unspecified => false,
            CellBound::Max(x) => value <= x,
            CellBound::GreaterThan(x) => value > x,
            CellBound::Range(lo, hi) => (lo..=hi).contains(&value),
            CellBound::Min(x) => value >= x,
            CellBound::LessThan(x) => value < x,
        }
    }

    /// Representative numeric limit, used only for monotonicity checks.
    fn limit(&self) -> Option<f64> {
        match *self {
            CellBound::Unspecified => None,
            CellBound::Max(x) | CellBound::GreaterThan(x) | CellBound::Min(x)
            | CellBound::LessThan(x) => Some(x),
            CellBound::Range(_, hi) => Some(hi),
        }
    }
}

/// The per-parameter class thresholds, classes I through V.
#[derive(Debug, Clone, PartialEq)]
pub struct WqiClassTable {
    rows: BTreeMap<Parameter, [CellBound; 6]>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WqiError {
    #[error("unknown parameter name: {0}")]
    UnknownParameter(String),
    #[error("negative concentration for {parameter}: {value}")]
    NegativeValue {
        parameter: &'static str,
        value: f64,
    },
    #[error("sample carries no parameters")]
    EmptySample,
    #[error("table thresholds for {parameter} are not monotone across classes")]
    NotMonotone { parameter: &'static str },
    #[error("table row for {parameter} has no specified cells")]
    EmptyRow { parameter: &'static str },
}

impl WqiClassTable {
    /// The shipped default: the reference table exactly as printed, with
    /// dashes kept as unspecified cells. The conductivity row's two
    /// printed thresholds land on classes I/IIA (1000 uS/cm) and V
    /// (6000 uS/cm).
    pub fn default_table() -> Self {
        use CellBound::*;
        let mut rows = BTreeMap::new();
        rows.insert(
            Parameter::AmmoniacalNitrogen,
            [Max(0.1), Max(0.3), Max(0.3), Max(0.9), Max(2.7), GreaterThan(2.7)],
        );
        rows.insert(
            Parameter::Bod,
            [Max(1.0), Max(3.0), Max(3.0), Max(6.0), Max(12.0), GreaterThan(12.0)],
        );
        rows.insert(
            Parameter::Cod,
            [Max(10.0), Max(25.0), Max(25.0), Max(50.0), Max(100.0), GreaterThan(100.0)],
        );
        rows.insert(
            Parameter::DissolvedOxygen,
            [Min(7.0), Range(5.0, 7.0), Range(5.0, 7.0), Range(3.0, 5.0), LessThan(3.0), LessThan(1.0)],
        );
        rows.insert(
            Parameter::Ph,
            [
                Range(6.5, 8.5),
                Range(6.5, 9.0),
                Range(6.5, 9.0),
                Range(5.0, 9.0),
                Range(5.0, 9.0),
                Unspecified,
            ],
        );
        rows.insert(
            Parameter::Color,
            [Max(15.0), Max(150.0), Max(150.0), Unspecified, Unspecified, Unspecified],
        );
        rows.insert(
            Parameter::ElectricalConductivity,
            [Max(1000.0), Max(1000.0), Unspecified, Unspecified, Unspecified, Max(6000.0)],
        );
        let table = Self { rows };
        debug_assert!(table.validate().is_ok());
        table
    }

    /// Builds a table from explicit rows, enforcing threshold monotonicity.
    pub fn from_rows(rows: BTreeMap<Parameter, [CellBound; 6]>) -> Result<Self, WqiError> {
        let table = Self { rows };
        table.validate()?;
        Ok(table)
    }

    pub fn rows(&self) -> &BTreeMap<Parameter, [CellBound; 6]> {
        &self.rows
    }

    /// Worse-is-higher rows must have non-decreasing limits across
    /// classes; the dissolved-oxygen row must be non-increasing.
    pub fn validate(&self) -> Result<(), WqiError> {
        for (param, cells) in &self.rows {
            let limits: Vec<f64> = cells.iter().filter_map(|c| c.limit()).collect();
            if limits.is_empty() {
                return Err(WqiError::EmptyRow {
                    parameter: param.key(),
                });
            }
            let ok = if param.higher_is_better() {
                limits.windows(2).all(|w| w[0] >= w[1])
            } else {
                limits.windows(2).all(|w| w[0] <= w[1])
            };
            if !ok {
                return Err(WqiError::NotMonotone {
                    parameter: param.key(),
                });
            }
        }
        Ok(())
    }

    /// Best (lowest) class whose cell the value satisfies, or
    /// `ExceedsWorst` when no specified cell admits it.
    pub fn assess(&self, param: Parameter, value: f64) -> Option<ParamAssessment> {
        let cells = self.rows.get(&param)?;
        for (cell, class) in cells.iter().zip(WqiClass::ALL) {
            if cell.satisfied_by(value) {
                return Some(ParamAssessment::Class(class));
            }
        }
        Some(ParamAssessment::ExceedsWorst)
    }
}

impl Default for WqiClassTable {
    fn default() -> Self {
        Self::default_table()
    }
}

/// Outcome for a single parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParamAssessment {
    Class(WqiClass),
    /// The value satisfies no specified cell: worse than the worst
    /// specified class.
    ExceedsWorst,
}

impl ParamAssessment {
    pub fn label(&self) -> &'static str {
        match self {
            ParamAssessment::Class(c) => c.as_str(),
            ParamAssessment::ExceedsWorst => ">V",
        }
    }
}

/// Classification verdict for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct WqiVerdict {
    /// Per-parameter assignments in parameter order.
    pub per_parameter: Vec<(Parameter, f64, ParamAssessment)>,
    /// Worst assessed class across parameters.
    pub overall: ParamAssessment,
    /// Parameters skipped because their table row is fully unspecified.
    pub skipped: Vec<Parameter>,
}

/// Classifies a parameter map against the table. Unknown parameter names
/// and negative concentrations are rejected; pH may be any non-negative
/// value.
pub fn classify(
    table: &WqiClassTable,
    sample: &BTreeMap<Parameter, f64>,
) -> Result<WqiVerdict, WqiError> {
    if sample.is_empty() {
        return Err(WqiError::EmptySample);
    }
    let mut per_parameter = Vec::with_capacity(sample.len());
    let mut skipped = Vec::new();
    let mut overall: Option<ParamAssessment> = None;
    for (&param, &value) in sample {
        if value < 0.0 {
            return Err(WqiError::NegativeValue {
                parameter: param.key(),
                value,
            });
        }
        match table.assess(param, value) {
            Some(assessment) => {
                per_parameter.push((param, value, assessment));
                overall = Some(match overall {
                    Some(prev) => prev.max(assessment),
                    None => assessment,
                });
            }
            None => skipped.push(param),
        }
    }
    match overall {
        Some(overall) => Ok(WqiVerdict {
            per_parameter,
            overall,
            skipped,
        }),
        None => Err(WqiError::EmptySample),
    }
}

/// Convenience entry point accepting string keys, as read from CSV
/// headers.
pub fn classify_named(
    table: &WqiClassTable,
    sample: &[(&str, f64)],
) -> Result<WqiVerdict, WqiError> {
    let mut map = BTreeMap::new();
    for (key, value) in sample {
        let param =
            Parameter::parse(key).ok_or_else(|| WqiError::UnknownParameter(String::from(*key)))?;
        map.insert(param, *value);
    }
    classify(table, &map)
}

/// Safe-range report over a pH series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhRangeReport {
    pub min: f64,
    pub max: f64,
    /// True when every value lies in the acceptable band [6.5, 9.0].
    pub safe: bool,
}

pub const PH_SAFE_LO: f64 = 6.5;
pub const PH_SAFE_HI: f64 = 9.0;

/// Reports the min/max of a pH series and whether the whole series lies
/// in the acceptable range [6.5, 9.0] (inclusive).
pub fn ph_safe_range_check(series: &[f64]) -> Result<PhRangeReport, WqiError> {
    if series.is_empty() {
        return Err(WqiError::EmptySample);
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in series {
        min = min.min(v);
        max = max.max(v);
    }
    Ok(PhRangeReport {
        min,
        max,
        safe: min >= PH_SAFE_LO && max <= PH_SAFE_HI,
    })
}
