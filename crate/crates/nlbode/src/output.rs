//! Artifact formatting: fixed-format floats, CSV assembly, JSON values.
//!
//! Every file the binary writes funnels through here so the byte-level
//! format lives in one place. Floats print with 17 significant digits,
//! enough to round-trip an f64 exactly; unbounded gains print as `inf`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use nlbode_core::df::DfCurve;
use nlbode_core::lfr::GainCurve;
use nlbode_core::sim::{ReferenceSignal, SimRun};
use nlbode_core::srg::Srg;
use serde_json::{json, Value};

pub fn fmt_f(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Gains as JSON: finite values stay numbers, infinities become the string
/// "inf" because JSON has no literal for them.
pub fn json_gain(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(fmt_f(x))
    }
}

pub fn json_opt(x: Option<f64>) -> Value {
    x.map(json_gain).unwrap_or(Value::Null)
}

// A sweep kind that was never computed leaves its column empty; the only
// such column (subharmonic on the loop transfer) is provably unbounded, so
// the hole prints as inf rather than a blank.
fn gain_at(col: &[f64], i: usize) -> f64 {
    col.get(i).copied().unwrap_or(f64::INFINITY)
}

/// One row per frequency: the four bound kinds, the underlying LTI
/// magnitude, and optionally the describing-function estimate.
pub fn gain_curve_csv(curve: &GainCurve, lti_mag: &[f64], df: Option<&DfCurve>) -> String {
    let mut out = String::from("omega_radps,gamma_sin,gamma_harm,gamma_subharm,gamma_full,lti_mag");
    if df.is_some() {
        out.push_str(",df_gain");
    }
    out.push('\n');
    let full = curve.gamma_full.unwrap_or(f64::NAN);
    for (i, &w) in curve.frequencies.iter().enumerate() {
        out.push_str(&fmt_f(w));
        for col in [&curve.gamma_sin, &curve.gamma_harm, &curve.gamma_subharm] {
            out.push(',');
            out.push_str(&fmt_f(gain_at(col, i)));
        }
        out.push(',');
        out.push_str(&fmt_f(full));
        out.push(',');
        out.push_str(&fmt_f(lti_mag[i]));
        if let Some(d) = df {
            out.push(',');
            out.push_str(&fmt_f(d.df_gain[i]));
        }
        out.push('\n');
    }
    out
}

pub fn gain_curve_json(curve: &GainCurve, lti_mag: &[f64], df: Option<&DfCurve>) -> Value {
    let gains = |col: &[f64]| -> Value {
        let n = curve.frequencies.len();
        Value::Array((0..n).map(|i| json_gain(gain_at(col, i))).collect())
    };
    let mut v = json!({
        "frequencies": curve.frequencies,
        "gamma_sin": gains(&curve.gamma_sin),
        "gamma_harm": gains(&curve.gamma_harm),
        "gamma_subharm": gains(&curve.gamma_subharm),
        "gamma_full": json_opt(curve.gamma_full),
        "bandwidth_closed": json_opt(curve.bandwidth_closed),
        "bandwidth_open": json_opt(curve.bandwidth_open),
        "lti_mag": lti_mag,
    });
    if let Some(d) = df {
        v["df_gain"] = json!(d.df_gain);
    }
    v
}

/// Time series of a closed-loop run; the reference is re-evaluated so the
/// file is self-contained.
pub fn sim_csv(run: &SimRun, reference: &ReferenceSignal) -> String {
    let mut out = String::from("t,r,e,theta,u\n");
    for i in 0..run.t.len() {
        let t = run.t[i];
        for (j, v) in [t, reference.eval(t), run.e[i], run.theta[i], run.u[i]]
            .into_iter()
            .enumerate()
        {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f(v));
        }
        out.push('\n');
    }
    out
}

/// Boundary dump of one SRG. The kind goes in a comment header; points are
/// grouped into closed segments (outer rim, plus the hole rim for inverted
/// regions). An unbounded SRG has no boundary to dump, just the marker.
pub fn srg_csv(srg: &Srg) -> String {
    let mut out = String::new();
    match srg {
        Srg::Unbounded => out.push_str("# kind: unbounded\nre,im,segment_id\n"),
        Srg::Region(r) => {
            out.push_str(&format!("# kind: {}\nre,im,segment_id\n", r.kind_name()));
            for (id, seg) in r.segments().iter().enumerate() {
                for z in seg {
                    out.push_str(&format!("{},{},{id}\n", fmt_f(z.re), fmt_f(z.im)));
                }
            }
        }
    }
    out
}

/// Serialize with sorted keys (serde_json maps are ordered) and a trailing
/// newline so files are stable byte-for-byte across runs.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nlbode_core::cgeom::{Region, Resolution};

    #[test]
    fn floats_print_seventeen_digits_and_inf_literals() {
        assert_eq!(fmt_f(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f(f64::INFINITY), "inf");
        assert_eq!(fmt_f(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_f(f64::NAN), "nan");
        let x = 0.1234567890123456789;
        assert_eq!(fmt_f(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn gain_json_wraps_infinities_as_strings() {
        assert_eq!(json_gain(2.0), json!(2.0));
        assert_eq!(json_gain(f64::INFINITY), json!("inf"));
        assert_eq!(json_opt(None), Value::Null);
    }

    #[test]
    fn missing_sweep_column_prints_inf() {
        let curve = GainCurve {
            frequencies: vec![1.0],
            gamma_sin: vec![0.5],
            gamma_harm: vec![0.75],
            gamma_subharm: Vec::new(),
            gamma_full: Some(2.0),
            bandwidth_closed: None,
            bandwidth_open: None,
        };
        let csv = gain_curve_csv(&curve, &[0.25], None);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "omega_radps,gamma_sin,gamma_harm,gamma_subharm,gamma_full,lti_mag"
        );
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[3], "inf");
        assert_eq!(row[5], "2.5000000000000000e-1");
    }

    #[test]
    fn srg_csv_carries_kind_and_segments() {
        let disk = Region::disk(1.0, 0.5, Resolution::new(64));
        let csv = srg_csv(&Srg::Region(disk));
        assert!(csv.starts_with("# kind: bounded\nre,im,segment_id\n"));
        assert!(csv.lines().count() > 10);
        assert_eq!(srg_csv(&Srg::Unbounded), "# kind: unbounded\nre,im,segment_id\n");
    }
}
