//! Text artifacts: CSV tables, JSON reports, and SVG scatter plots.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::concurrence::ConcurrencePoint;
use crate::extremal::BoundaryCurve;
use crate::sampler::ScatterDataset;

/// Crate version embedded in every artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits kept in CSV and JSON output.
pub const SIG_DIGITS: usize = 12;

/// Rounds to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Shortest text that reads back as `round_sig(x)`.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

/// Applies [`round_sig`] to every float inside a JSON value.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            serde_json::Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Pretty JSON of `value` with floats rounded, plus a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = round_json(serde_json::to_value(value)?);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

/// Wraps a payload with the tool version and the run configuration.
pub fn artifact<T: Serialize, C: Serialize>(kind: &str, config: &C, payload: &T) -> serde_json::Result<Value> {
    Ok(serde_json::json!({
        "tool": "csconc",
        "version": VERSION,
        "kind": kind,
        "config": serde_json::to_value(config)?,
        "result": serde_json::to_value(payload)?,
    }))
}

/// `index,s1,s2` rows.
pub fn dataset_csv(d: &ScatterDataset) -> String {
    let mut out = String::from("index,s1,s2\n");
    for (i, p) in d.points.iter().enumerate() {
        writeln!(out, "{i},{},{}", fmt_num(p.s1), fmt_num(p.s2)).expect("string write");
    }
    out
}

/// Sidecar metadata for a dataset.
pub fn dataset_metadata(d: &ScatterDataset) -> Value {
    serde_json::json!({
        "tool": "csconc",
        "version": VERSION,
        "kind": "scatter",
        "spec": d.spec,
        "mode": d.mode,
        "count": d.points.len(),
        "rng": "ChaCha8, seed_from_u64(seed), stream = trial index",
        "measure": "independent standard complex Gaussian per orbit, normalized",
    })
}

/// `s1,s2,source,param_id` rows for every point of every curve.
pub fn boundary_csv(curves: &[BoundaryCurve]) -> String {
    let mut out = String::from("s1,s2,source,param_id\n");
    for c in curves {
        for p in &c.points {
            writeln!(out, "{},{},{},{}", fmt_num(p.s1), fmt_num(p.s2), c.source, c.param_id)
                .expect("string write");
        }
    }
    out
}

/// Scatter points and polylines drawn on the fixed viewport `[-1, 1]²`.
#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<ConcurrencePoint>,
    pub curves: Vec<Vec<ConcurrencePoint>>,
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 60.0;

fn px(x: f64) -> f64 {
    MARGIN + (x + 1.0) / 2.0 * (SIZE - 2.0 * MARGIN)
}

fn py(y: f64) -> f64 {
    SIZE - MARGIN - (y + 1.0) / 2.0 * (SIZE - 2.0 * MARGIN)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let w = |s: &mut String, t: String| s.push_str(&t);
        w(&mut s, format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
        ));
        w(&mut s, format!("<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"));
        w(&mut s, format!(
            "<rect x=\"{m}\" y=\"{m}\" width=\"{d}\" height=\"{d}\" fill=\"none\" stroke=\"black\"/>\n",
            m = MARGIN,
            d = SIZE - 2.0 * MARGIN
        ));
        // axes through the origin
        w(&mut s, format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\"/>\n",
            px(-1.0), py(0.0), px(1.0), py(0.0)
        ));
        w(&mut s, format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\"/>\n",
            px(0.0), py(-1.0), px(0.0), py(1.0)
        ));
        for t in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            w(&mut s, format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{t}</text>\n",
                px(t), SIZE - MARGIN + 16.0
            ));
            w(&mut s, format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{t}</text>\n",
                MARGIN - 6.0, py(t) + 4.0
            ));
        }
        w(&mut s, format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
            SIZE / 2.0, MARGIN / 2.0, escape(&self.title)
        ));
        w(&mut s, format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            SIZE / 2.0, SIZE - 18.0, escape(&self.x_label)
        ));
        w(&mut s, format!(
            "<text x=\"18\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
            SIZE / 2.0, SIZE / 2.0, escape(&self.y_label)
        ));
        s.push_str("<g fill=\"#1f5fa8\" fill-opacity=\"0.35\">\n");
        for p in &self.points {
            w(&mut s, format!("<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"0.8\"/>\n", px(p.s1), py(p.s2)));
        }
        s.push_str("</g>\n");
        for c in &self.curves {
            if c.len() < 2 {
                continue;
            }
            let pts: Vec<String> = c.iter().map(|p| format!("{:.2},{:.2}", px(p.s1), py(p.s2))).collect();
            w(&mut s, format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.2\"/>\n",
                pts.join(" ")
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.123456789012345), 0.123456789012);
        assert_eq!(round_sig(-1234.567890123457), -1234.56789012);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
    }

    #[test]
    fn json_rounding_is_recursive() {
        let v = serde_json::json!({"a": [1.0 / 3.0, 2], "b": {"c": 2.0 / 3.0}});
        let r = round_json(v);
        assert_eq!(r["a"][0].as_f64().unwrap(), 0.333333333333);
        assert_eq!(r["a"][1].as_u64().unwrap(), 2);
        assert_eq!(r["b"]["c"].as_f64().unwrap(), 0.666666666667);
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let p = Plot {
            title: "a < b".into(),
            points: vec![ConcurrencePoint::new(0.0, 0.0)],
            curves: vec![vec![ConcurrencePoint::new(-1.0, 1.0), ConcurrencePoint::new(1.0, -1.0)]],
            ..Default::default()
        };
        let s = p.render();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a &lt; b"));
        assert!(s.contains("<circle cx=\"300.00\" cy=\"300.00\""));
        assert!(s.contains("<polyline"));
    }
}
