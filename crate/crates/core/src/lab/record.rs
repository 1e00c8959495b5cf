use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::config::Algorithm;
use crate::error::{Error, Result};

/// One `(cell, algorithm, trial)` outcome, in the fixed CSV layout
/// `n,p,K,delta_bar_sq,algorithm,trial,seed,err,partnership_mse,runtime_ms,flags`.
///
/// `flags` holds `key=value` pairs joined by `;` in key order: the regime
/// label, optional `zeta`/`mmse_lower`, and skip reasons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub p: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub delta_bar_sq: f64,
    pub algorithm: Algorithm,
    pub trial: usize,
    pub seed: u64,
    pub err: Option<f64>,
    pub partnership_mse: Option<f64>,
    pub runtime_ms: Option<f64>,
    #[serde(with = "flag_format")]
    pub flags: BTreeMap<String, String>,
}

impl SweepRecord {
    pub fn flag(&self, key: &str) -> Option<&str> {
        self.flags.get(key).map(String::as_str)
    }

    pub fn zeta(&self) -> Option<f64> {
        self.flag("zeta").and_then(|v| v.parse().ok())
    }

    pub fn mmse_lower(&self) -> Option<f64> {
        self.flag("mmse_lower").and_then(|v| v.parse().ok())
    }

    pub fn skipped(&self) -> bool {
        self.flags.contains_key("skipped")
    }
}

mod flag_format {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(flags: &BTreeMap<String, String>, s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<String> = flags.iter().map(|(k, v)| format!("{k}={v}")).collect();
        s.serialize_str(&text.join(";"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, String>, D::Error> {
        let text = String::deserialize(d)?;
        text.split(';')
            .filter(|part| !part.is_empty())
            .map(|part| {
                part.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| serde::de::Error::custom(format!("flag {part:?} lacks '='")))
            })
            .collect()
    }
}

pub fn write_records<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        if r.flags.iter().any(|(k, v)| k.contains(['=', ';']) || v.contains(';')) {
            return Err(Error::InvalidParameter(format!("flag set {:?} is not encodable", r.flags)));
        }
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    rd.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// CSV text of `records`.
pub fn records_to_csv(records: &[SweepRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_records(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}
