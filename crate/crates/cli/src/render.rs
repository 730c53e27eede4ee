use anyhow::Result;
use serde::Serialize;

use shadiv_core::divisibility::DivisibilityVerdict;

use crate::config::OutputFormat;

/// Pretty JSON with object keys sorted, so output is byte-stable.
pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

pub fn serializable<T: Serialize>(value: &T, format: OutputFormat, text: impl Fn(&T) -> String) -> Result<String> {
    match format {
        OutputFormat::Json => json(value),
        OutputFormat::Text | OutputFormat::Tsv => Ok(text(value)),
    }
}

pub fn verdicts(vs: &[DivisibilityVerdict], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => json(&vs),
        OutputFormat::Tsv => {
            let mut out = String::from(DivisibilityVerdict::tsv_header());
            out.push('\n');
            for v in vs {
                out.push_str(&v.tsv_row());
                out.push('\n');
            }
            Ok(out)
        }
        OutputFormat::Text => {
            let mut out = String::new();
            for v in vs {
                out.push_str(&format!("{} at p = {}: {:?}\n", v.curve, v.p, v.outcome));
                for s in &v.chain {
                    let inputs: Vec<String> = s.inputs.iter().map(|(k, x)| format!("{k}={x}")).collect();
                    out.push_str(&format!("  {} [{}] ({:?}) {}\n", s.theorem, s.quote_tag, s.rigor, inputs.join(", ")));
                }
                for n in &v.evidence.notes {
                    out.push_str(&format!("  note: {n}\n"));
                }
                for w in &v.evidence.warnings {
                    out.push_str(&format!("  warning: {w}\n"));
                }
            }
            Ok(out)
        }
    }
}
