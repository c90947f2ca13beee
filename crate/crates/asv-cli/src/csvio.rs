//! Readers and writers for the toolkit's file formats: trajectory and
//! sample CSVs, decay-table CSVs, the water-property grid, the mission
//! JSON, the WQI class table, and the raw telemetry dump. All numeric
//! output carries 9 significant digits with LF line endings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use asv_core::guidance::Waypoint;
use asv_core::sensing::{WaterField, WaterSample};
use asv_core::sim::Trajectory;
use asv_core::swath::{OscillationAxis, OscillationRecord};
use asv_core::wqi::{CellBound, Parameter, WqiClassTable};
use serde::Deserialize;

use crate::CliError;

/// 9 significant digits, locale-free.
pub fn sig9(v: f64) -> String {
    format!("{v:.8e}")
}

fn parse_f64(raw: &str, what: &str, line: usize) -> Result<f64, CliError> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Input(format!("line {line}: bad {what}: {raw:?}")))
}

// ---------------------------------------------------------------------------
// Trajectory CSV: t,x,y,psi,u,v,r,Xb,Yb,N
// ---------------------------------------------------------------------------

pub fn write_trajectory_csv(path: &Path, trajectory: &Trajectory) -> Result<(), CliError> {
    let mut out = String::from("t,x,y,psi,u,v,r,Xb,Yb,N\n");
    for s in &trajectory.samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            sig9(s.t),
            sig9(s.state.pose.x),
            sig9(s.state.pose.y),
            sig9(s.state.pose.psi),
            sig9(s.state.vel.u),
            sig9(s.state.vel.v),
            sig9(s.state.vel.r),
            sig9(s.tr.xb),
            sig9(s.tr.yb),
            sig9(s.tr.n),
        );
    }
    fs::write(path, out).map_err(|e| CliError::Io(path.display().to_string(), e))
}

// ---------------------------------------------------------------------------
// Samples CSV: t_ms,x_m,y_m,heading_deg,ph,ec_mScm,temp_C
// ---------------------------------------------------------------------------

pub const SAMPLES_HEADER: &str = "t_ms,x_m,y_m,heading_deg,ph,ec_mScm,temp_C";

fn heading_deg(rad: f64) -> f64 {
    let mut deg = rad.to_degrees();
    deg -= 360.0 * (deg / 360.0).floor();
    deg
}

pub fn write_samples_csv(path: &Path, samples: &[WaterSample]) -> Result<(), CliError> {
    let mut out = String::from(SAMPLES_HEADER);
    out.push('\n');
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.t_ms,
            sig9(s.x),
            sig9(s.y),
            sig9(heading_deg(s.heading)),
            sig9(s.ph),
            sig9(s.ec),
            sig9(s.temp),
        );
    }
    fs::write(path, out).map_err(|e| CliError::Io(path.display().to_string(), e))
}

// ---------------------------------------------------------------------------
// Decay-table CSVs
// input:  label,freeboard_in,n,b1_in,bn1_in,dt_s,k_lbsft
// output: delta,zeta,omega_d,omega_n,k,c,cc   (+ ok column with --expected)
// ---------------------------------------------------------------------------

pub const TABLE1_HEADER: &str = "label,freeboard_in,n,b1_in,bn1_in,dt_s,k_lbsft";

/// Parses the raw decay-test table. Malformed rows come back as
/// (line number, message) so the caller can report and continue.
#[allow(clippy::type_complexity)]
pub fn read_decay_table(
    path: &Path,
) -> Result<(Vec<(usize, OscillationRecord)>, Vec<(usize, String)>), CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    let mut saw_header = false;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            saw_header = true;
            if line != TABLE1_HEADER {
                return Err(CliError::Input(format!(
                    "{}: expected header {TABLE1_HEADER:?}, got {line:?}",
                    path.display()
                )));
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            bad.push((line_no, format!("expected 7 fields, got {}", fields.len())));
            continue;
        }
        let parsed = (|| -> Result<OscillationRecord, CliError> {
            let label = OscillationAxis::parse(fields[0].trim()).ok_or_else(|| {
                CliError::Input(format!("line {line_no}: unknown axis label {:?}", fields[0]))
            })?;
            Ok(OscillationRecord {
                label,
                freeboard: parse_f64(fields[1], "freeboard_in", line_no)?,
                n_cycles: fields[2].trim().parse::<u32>().map_err(|_| {
                    CliError::Input(format!("line {line_no}: bad n: {:?}", fields[2]))
                })?,
                b1: parse_f64(fields[3], "b1_in", line_no)?,
                b_n1: parse_f64(fields[4], "bn1_in", line_no)?,
                delta_t: parse_f64(fields[5], "dt_s", line_no)?,
                k_stiffness: parse_f64(fields[6], "k_lbsft", line_no)?,
            })
        })();
        match parsed {
            Ok(rec) => rows.push((line_no, rec)),
            Err(e) => bad.push((line_no, e.to_string())),
        }
    }
    if !saw_header {
        return Err(CliError::Input(format!("{}: empty CSV", path.display())));
    }
    Ok((rows, bad))
}

/// Expected derived values for comparison: delta,zeta,omega_d,omega_n,k,c,cc.
pub fn read_expected_table(path: &Path) -> Result<Vec<[f64; 7]>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || idx == 0 {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(CliError::Input(format!(
                "{} line {}: expected 7 fields",
                path.display(),
                idx + 1
            )));
        }
        let mut row = [0.0; 7];
        for (slot, raw) in row.iter_mut().zip(&fields) {
            *slot = parse_f64(raw, "expected value", idx + 1)?;
        }
        rows.push(row);
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Water-property grid CSV: x,y,ph,ec_ref,temp (regular lattice)
// ---------------------------------------------------------------------------

pub fn read_field_csv(path: &Path) -> Result<WaterField, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let mut nodes: Vec<(f64, f64, f64, f64, f64)> = Vec::new();
    let mut saw_header = false;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            saw_header = true;
            if line != "x,y,ph,ec_ref,temp" {
                return Err(CliError::Input(format!(
                    "{}: expected header \"x,y,ph,ec_ref,temp\", got {line:?}",
                    path.display()
                )));
            }
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(CliError::Input(format!(
                "{} line {}: expected 5 fields",
                path.display(),
                idx + 1
            )));
        }
        nodes.push((
            parse_f64(f[0], "x", idx + 1)?,
            parse_f64(f[1], "y", idx + 1)?,
            parse_f64(f[2], "ph", idx + 1)?,
            parse_f64(f[3], "ec_ref", idx + 1)?,
            parse_f64(f[4], "temp", idx + 1)?,
        ));
    }
    if nodes.is_empty() {
        return Err(CliError::Input(format!(
            "{}: field grid has no nodes",
            path.display()
        )));
    }

    let mut xs: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    let mut ys: Vec<f64> = nodes.iter().map(|n| n.1).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.dedup();

    let nxy = xs.len() * ys.len();
    if nodes.len() != nxy {
        return Err(CliError::Input(format!(
            "{}: grid is not a full lattice ({} nodes for {} x {} axes)",
            path.display(),
            nodes.len(),
            xs.len(),
            ys.len()
        )));
    }
    let index = |axis: &[f64], v: f64| axis.iter().position(|&a| a == v).unwrap();
    let mut ph = vec![f64::NAN; nxy];
    let mut ec = vec![f64::NAN; nxy];
    let mut temp = vec![f64::NAN; nxy];
    for (x, y, p, e, t) in nodes {
        let i = index(&xs, x) * ys.len() + index(&ys, y);
        ph[i] = p;
        ec[i] = e;
        temp[i] = t;
    }
    if ph.iter().any(|v| v.is_nan()) {
        return Err(CliError::Input(format!(
            "{}: grid has duplicate or missing lattice nodes",
            path.display()
        )));
    }
    WaterField::from_grid(xs, ys, ph, ec, temp)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Mission JSON: [{"x": <m>, "y": <m>, "r": <m, optional>}, ...]
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MissionEntry {
    x: f64,
    y: f64,
    r: Option<f64>,
}

pub fn read_mission_json(path: &Path, default_radius: f64) -> Result<Vec<Waypoint>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let entries: Vec<MissionEntry> = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if entries.is_empty() {
        return Err(CliError::Input(format!(
            "{}: mission needs at least one waypoint",
            path.display()
        )));
    }
    entries
        .into_iter()
        .map(|e| {
            let r = e.r.unwrap_or(default_radius);
            if !(r > 0.0) {
                return Err(CliError::Input(format!(
                    "{}: capture radius must be > 0, got {r}",
                    path.display()
                )));
            }
            Ok(Waypoint::new(e.x, e.y, r))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// WQI class table CSV:
// parameter,unit,classI,classIIA,classIIB,classIII,classIV,classV
// ---------------------------------------------------------------------------

fn parse_cell(raw: &str, higher_is_better: bool, line: usize) -> Result<CellBound, CliError> {
    let raw = raw.trim();
    if raw.is_empty() || raw == "-" {
        return Ok(CellBound::Unspecified);
    }
    if let Some(rest) = raw.strip_prefix('>') {
        return Ok(CellBound::GreaterThan(parse_f64(rest, "cell", line)?));
    }
    if let Some(rest) = raw.strip_prefix('<') {
        return Ok(CellBound::LessThan(parse_f64(rest, "cell", line)?));
    }
    if let Some((lo, hi)) = raw.split_once('-') {
        if !lo.is_empty() {
            return Ok(CellBound::Range(
                parse_f64(lo, "cell", line)?,
                parse_f64(hi, "cell", line)?,
            ));
        }
    }
    let v = parse_f64(raw, "cell", line)?;
    Ok(if higher_is_better {
        CellBound::Min(v)
    } else {
        CellBound::Max(v)
    })
}

pub fn read_wqi_table(path: &Path) -> Result<WqiClassTable, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    parse_wqi_table(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn parse_wqi_table(text: &str) -> Result<WqiClassTable, CliError> {
    let mut rows = std::collections::BTreeMap::new();
    let mut saw_header = false;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            saw_header = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(CliError::Input(format!(
                "line {}: expected 8 fields, got {}",
                idx + 1,
                f.len()
            )));
        }
        let param = Parameter::parse(f[0].trim()).ok_or_else(|| {
            CliError::Input(format!("line {}: unknown parameter {:?}", idx + 1, f[0]))
        })?;
        let mut cells = [CellBound::Unspecified; 6];
        for (slot, raw) in cells.iter_mut().zip(&f[2..]) {
            *slot = parse_cell(raw, param.higher_is_better(), idx + 1)?;
        }
        rows.insert(param, cells);
    }
    WqiClassTable::from_rows(rows).map_err(|e| CliError::Input(e.to_string()))
}

// ---------------------------------------------------------------------------
// WQI samples CSV reader: the sim's samples schema plus optional
// laboratory parameter columns.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default)]
pub struct WqiSampleRow {
    pub line: usize,
    /// parameter key -> value in the table's units.
    pub values: Vec<(Parameter, f64)>,
    pub ph: Option<f64>,
}

pub fn read_wqi_samples(path: &Path) -> Result<Vec<WqiSampleRow>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| {
        let l = l.trim();
        !l.is_empty() && !l.starts_with('#')
    });
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::Input(format!("{}: empty CSV", path.display())))?;

    #[derive(Clone, Copy)]
    enum Col {
        Ignore,
        Ph,
        EcMilli,
        Direct(Parameter),
    }
    let mut cols = Vec::new();
    for name in header.split(',') {
        let col = match name.trim() {
            "t_ms" | "x_m" | "y_m" | "heading_deg" | "temp_C" => Col::Ignore,
            "ph" => Col::Ph,
            "ec_mScm" => Col::EcMilli,
            "ec_uScm" => Col::Direct(Parameter::ElectricalConductivity),
            "an_mgl" => Col::Direct(Parameter::AmmoniacalNitrogen),
            "bod_mgl" => Col::Direct(Parameter::Bod),
            "cod_mgl" => Col::Direct(Parameter::Cod),
            "do_mgl" => Col::Direct(Parameter::DissolvedOxygen),
            "color_tuc" => Col::Direct(Parameter::Color),
            other => {
                return Err(CliError::Input(format!(
                    "{}: unknown column {other:?}",
                    path.display()
                )))
            }
        };
        cols.push(col);
    }

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(CliError::Input(format!(
                "{} line {}: expected {} fields, got {}",
                path.display(),
                idx + 1,
                cols.len(),
                fields.len()
            )));
        }
        let mut row = WqiSampleRow {
            line: idx + 1,
            ..WqiSampleRow::default()
        };
        for (col, raw) in cols.iter().zip(&fields) {
            match col {
                Col::Ignore => {}
                Col::Ph => {
                    let v = parse_f64(raw, "ph", idx + 1)?;
                    row.ph = Some(v);
                    row.values.push((Parameter::Ph, v));
                }
                Col::EcMilli => {
                    // Table thresholds are in uS/cm.
                    let v = parse_f64(raw, "ec_mScm", idx + 1)?;
                    row.values.push((Parameter::ElectricalConductivity, v * 1000.0));
                }
                Col::Direct(p) => {
                    row.values.push((*p, parse_f64(raw, p.key(), idx + 1)?));
                }
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no sample rows",
            path.display()
        )));
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Telemetry dump: concatenated binary frames.
// ---------------------------------------------------------------------------

pub fn write_frame_dump(path: &Path, samples: &[WaterSample]) -> Result<(), CliError> {
    let mut bytes = Vec::with_capacity(samples.len() * asv_core::telemetry::FRAME_LEN);
    for s in samples {
        let frame = asv_core::telemetry::encode_frame(s)
            .map_err(|e| CliError::Input(format!("cannot encode sample: {e}")))?;
        bytes.extend_from_slice(&frame);
    }
    fs::write(path, bytes).map_err(|e| CliError::Io(path.display().to_string(), e))
}

pub fn read_frame_dump(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}
