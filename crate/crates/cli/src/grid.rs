//! Parameter grids written as `start:stop:step`, comma lists or single values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    spec: String,
    values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("bad grid {spec:?}: {reason}")]
pub struct GridError {
    spec: String,
    reason: String,
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `[min, max]` of the grid.
    pub fn bounds(&self) -> (f64, f64) {
        let min = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = self
            .values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (min, max)
    }
}

impl FromStr for Grid {
    type Err = GridError;

    /// A range runs from `start` up to `stop` inclusive, with a tolerance of
    /// `1e-9` steps so rounding in `stop - start` does not drop the endpoint.
    fn from_str(s: &str) -> Result<Self, GridError> {
        let err = |reason: &str| GridError {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let num = |t: &str| -> Result<f64, GridError> {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| err(&format!("{t:?} is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(err("values must be finite"))
            }
        };
        let spec = s.trim();
        let values = if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            let [start, stop, step] = parts[..] else {
                return Err(err("ranges are start:stop:step"));
            };
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0) {
                return Err(err("step must be positive"));
            }
            if stop < start {
                return Err(err("stop is below start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            if count > 10_000_000 {
                return Err(err("grid has too many points"));
            }
            (0..=count).map(|k| start + k as f64 * step).collect()
        } else {
            spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err(err("grid is empty"));
        }
        Ok(Grid {
            spec: spec.to_string(),
            values,
        })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.spec)
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
