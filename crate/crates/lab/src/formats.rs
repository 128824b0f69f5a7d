//! File formats. CSV floats use 17 significant digits (`{:.16e}`), JSON goes
//! through serde_json; nothing records times or absolute output paths.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use photon_su6::algebra::{AdjointRep, GeneratorBasis, StructureConstants};
use photon_su6::field::{SpinTextureMap, StokesField};
use photon_su6::optics::Frame;
use photon_su6::optics::Record;
use photon_su6::state::{named_state, CoherentState, SpherePoint, TorusPoint, NAMED_STATES};
use serde_json::{json, Value};

use crate::error::{LabError, Result};

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn state_to_json(s: &CoherentState) -> Value {
    let alpha: Vec<[f64; 2]> = s.amplitudes().iter().map(|z| [z.re, z.im]).collect();
    json!({ "alpha": alpha, "n0": s.n0() })
}

/// Parse `{"alpha": [[re, im] × 6], "n0": float}`; `n0` and `hbar` are optional.
pub fn state_from_json(text: &str, path: &Path) -> Result<CoherentState> {
    let bad = |message: String| LabError::StateFile { path: path.to_path_buf(), message };
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let alpha = v.get("alpha").and_then(Value::as_array).ok_or_else(|| bad("missing 'alpha' array".into()))?;
    if alpha.len() != 6 {
        return Err(bad(format!("'alpha' needs 6 entries, found {}", alpha.len())));
    }
    let mut amps = [Complex64::new(0.0, 0.0); 6];
    for (k, entry) in alpha.iter().enumerate() {
        let pair =
            entry.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad(format!("alpha[{k}] must be [re, im]")))?;
        let re = pair[0].as_f64().ok_or_else(|| bad(format!("alpha[{k}][0] is not a number")))?;
        let im = pair[1].as_f64().ok_or_else(|| bad(format!("alpha[{k}][1] is not a number")))?;
        amps[k] = Complex64::new(re, im);
    }
    let scalar = |key: &str| -> Result<f64> {
        match v.get(key) {
            None => Ok(1.0),
            Some(x) => x.as_f64().filter(|x| *x > 0.0).ok_or_else(|| bad(format!("'{key}' must be a positive number"))),
        }
    };
    Ok(CoherentState::new(amps)?.with_scale(scalar("n0")?, scalar("hbar")?))
}

/// A catalog name, or a JSON file resolved against `base`.
pub fn resolve_state(spec: &str, base: &Path) -> Result<CoherentState> {
    if NAMED_STATES.contains(&spec) {
        return Ok(named_state(spec)?);
    }
    let path = base.join(spec);
    if spec.ends_with(".json") || path.is_file() {
        let text = fs::read_to_string(&path).map_err(LabError::io(&path))?;
        return state_from_json(&text, &path);
    }
    Ok(named_state(spec)?)
}

pub fn sphere_json(p: &SpherePoint) -> Value {
    json!({
        "coords": p.coords,
        "theta": p.theta,
        "phi": p.phi,
        "degenerate_azimuth": p.degenerate_azimuth,
    })
}

pub fn torus_json(t: &TorusPoint) -> Value {
    json!({ "theta_p": t.theta_p, "phi_t": t.phi_t, "l_p": t.l_p })
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| LabError::Csv(e.into_error().into()))
}

pub const TRAJECTORY_HEADER: [&str; 12] =
    ["parameter", "S1", "S2", "S3", "A1", "A2", "A3", "L1", "L2", "L3", "theta_p", "phi_t"];

/// Trajectory rows; families not in `record` are left empty.
pub fn trajectory_csv(frames: &[Frame], record: &[Record]) -> Result<Vec<u8>> {
    let has = |r: Record| record.is_empty() || record.contains(&r);
    let rows = frames.iter().map(|f| {
        let mut row = vec![float(f.parameter)];
        for (r, p) in [
            (Record::SkyrmionSphere, &f.observables.skyrmion),
            (Record::AntiskyrmionSphere, &f.observables.antiskyrmion),
            (Record::OamSphere, &f.observables.oam),
        ] {
            row.extend(p.coords.iter().map(|&x| if has(r) { float(x) } else { String::new() }));
        }
        match (&f.observables.torus, has(Record::Torus)) {
            (Some(t), true) => row.extend([float(t.theta_p), float(t.phi_t)]),
            _ => row.extend([String::new(), String::new()]),
        }
        row
    });
    csv_bytes(&TRAJECTORY_HEADER, rows)
}

pub fn stokes_csv(sf: &StokesField) -> Result<Vec<u8>> {
    let g = &sf.grid;
    let n = g.size();
    let rows = (0..g.len()).map(|k| {
        let (i, j) = (k % n, k / n);
        let mut row = vec![
            float(g.coord(i)),
            float(g.coord(j)),
            float(sf.s0[k]),
            float(sf.s1[k]),
            float(sf.s2[k]),
            float(sf.s3[k]),
        ];
        match sf.n[k] {
            Some(v) => row.extend(v.iter().map(|&x| float(x))),
            None => row.extend([String::new(), String::new(), String::new()]),
        }
        row
    });
    csv_bytes(&["x", "y", "S0", "S1", "S2", "S3", "nx", "ny", "nz"], rows)
}

pub fn texture_map_csv(map: &SpinTextureMap) -> Result<Vec<u8>> {
    let mut rows = Vec::with_capacity(map.vectors.len());
    for t in 0..map.theta_bins {
        for p in 0..map.phi_bins {
            let k = map.index(t, p);
            let mut row = vec![t.to_string(), p.to_string()];
            match map.vectors[k] {
                Some(v) => row.extend(v.iter().map(|&x| float(x))),
                None => row.extend([String::new(), String::new(), String::new()]),
            }
            row.push(map.counts[k].to_string());
            rows.push(row);
        }
    }
    csv_bytes(&["theta_bin", "phi_bin", "nx", "ny", "nz", "count"], rows)
}

/// Binary 8-bit PGM. Pixel value `round(255 (v - lo) / (hi - lo))`, clamped;
/// the top image row is the largest `y`.
pub fn pgm(values: &[f64], size: usize, lo: f64, hi: f64) -> Vec<u8> {
    let mut out = format!("P5\n{size} {size}\n255\n").into_bytes();
    let span = if hi > lo { hi - lo } else { 1.0 };
    for j in (0..size).rev() {
        for i in 0..size {
            let v = (255.0 * (values[j * size + i] - lo) / span).round().clamp(0.0, 255.0);
            out.push(v as u8);
        }
    }
    out
}

/// The four Stokes channels as PGM images with their scaling ranges.
pub fn stokes_pgms(sf: &StokesField) -> Vec<(&'static str, Vec<u8>, f64, f64)> {
    let peak = sf.s0.iter().copied().fold(0.0, f64::max);
    let n = sf.grid.size();
    vec![
        ("S0", pgm(&sf.s0, n, 0.0, peak), 0.0, peak),
        ("S1", pgm(&sf.s1, n, -peak, peak), -peak, peak),
        ("S2", pgm(&sf.s2, n, -peak, peak), -peak, peak),
        ("S3", pgm(&sf.s3, n, -peak, peak), -peak, peak),
    ]
}

pub fn basis_json(basis: &GeneratorBasis) -> Value {
    let generators: Vec<Value> = basis
        .generators()
        .iter()
        .zip(basis.labels())
        .map(|(m, label)| {
            let rows: Vec<Vec<[f64; 2]>> =
                (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect();
            json!({
                "index": label.index,
                "name": label.name(),
                "family": label.family.as_str(),
                "matrix": rows,
            })
        })
        .collect();
    json!({ "basis_order": photon_su6::algebra::BASIS_ORDER_VERSION, "generators": generators })
}

/// Threshold below which tensor entries are omitted from exports.
pub const EXPORT_ZERO: f64 = 1e-14;

pub fn structure_constants_csv(g: &StructureConstants) -> Result<Vec<u8>> {
    let rows = g
        .nonzero(EXPORT_ZERO)
        .map(|(l, m, n, v)| vec![(l + 1).to_string(), (m + 1).to_string(), (n + 1).to_string(), float(v)]);
    csv_bytes(&["l", "m", "n", "g"], rows)
}

pub fn adjoint_csv(adj: &AdjointRep) -> Result<Vec<u8>> {
    let mut rows = Vec::new();
    for (l, g) in adj.matrices().iter().enumerate() {
        for m in 0..g.nrows() {
            for n in 0..g.ncols() {
                if g[(m, n)].abs() > EXPORT_ZERO {
                    rows.push(vec![(l + 1).to_string(), (m + 1).to_string(), (n + 1).to_string(), float(g[(m, n)])]);
                }
            }
        }
    }
    csv_bytes(&["l", "m", "n", "G_lmn"], rows)
}

/// Writes files plus a `<name>.meta.json` sidecar next to each.
pub struct OutputDir {
    root: PathBuf,
    provenance: Value,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path, provenance: Value) -> Result<Self> {
        fs::create_dir_all(root).map_err(LabError::io(root))?;
        Ok(Self { root: root.to_path_buf(), provenance, written: Vec::new() })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8], extra: Value) -> Result<()> {
        let path = self.root.join(name);
        fs::write(&path, bytes).map_err(LabError::io(&path))?;
        let mut meta = self.provenance.clone();
        meta["file"] = json!(name);
        if let (Some(m), Value::Object(e)) = (meta.as_object_mut(), extra) {
            m.extend(e);
        }
        let side = self.root.join(format!("{name}.meta.json"));
        let mut text = serde_json::to_string_pretty(&meta).expect("json values serialize");
        text.push('\n');
        fs::write(&side, text).map_err(LabError::io(&side))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &Value, extra: Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
        text.push('\n');
        self.write(name, text.as_bytes(), extra)
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }
}
