//! Bucketing of one axis of the quality/time plane.
//!
//! With `β` buckets over `[v, v + l]`:
//!
//! * linear: `Δ(y) = (y - v) β / l` and `h(y) = ⌊Δ(y)⌋ l / β + v`, the
//!   lower edge of the bucket;
//! * log: `Δ(y) = β log(1 + y - v) / log(1 + l)` and
//!   `h(y) = exp((⌊Δ(y)⌋ + 1) log(1 + l) / β) - 1 + v`, the upper edge.
//!
//! Linear buckets are closed below, log buckets closed above, so a value on
//! an edge maps to the bucket whose representative it is and `h` is
//! idempotent. Bucket indices are clamped to `[0, β - 1]`.

use std::borrow::Borrow;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{common_direction, AttainmentError, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Linear => f.write_str("linear"),
            Scale::Log => f.write_str("log"),
        }
    }
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" | "lin" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            other => Err(format!("unknown scale `{other}` (expected linear or log)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    buckets: usize,
    origin: f64,
    extent: f64,
    scale: Scale,
    clamp: bool,
}

impl Axis {
    pub fn new(buckets: usize, origin: f64, extent: f64, scale: Scale) -> Result<Self, AttainmentError> {
        if buckets == 0 {
            return Err(AttainmentError::InvalidAxis("bucket count must be >= 1"));
        }
        if !origin.is_finite() {
            return Err(AttainmentError::InvalidAxis("origin must be finite"));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(AttainmentError::InvalidAxis("extent must be finite and > 0"));
        }
        Ok(Self {
            buckets,
            origin,
            extent,
            scale,
            clamp: true,
        })
    }

    /// Values outside `[v, v + l]` become errors instead of being clamped.
    pub fn without_clamping(mut self) -> Self {
        self.clamp = false;
        self
    }

    pub fn buckets(&self) -> usize {
        self.buckets
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn clamps(&self) -> bool {
        self.clamp
    }

    /// Representative value of bucket `index` (see the module docs).
    pub fn representative(&self, index: usize) -> f64 {
        let beta = self.buckets as f64;
        match self.scale {
            Scale::Linear => index as f64 * self.extent / beta + self.origin,
            Scale::Log => {
                ((index + 1) as f64 * (1.0 + self.extent).ln() / beta).exp() - 1.0 + self.origin
            }
        }
    }

    /// `Δ(y)` before flooring.
    pub fn continuous_index(&self, y: f64) -> f64 {
        let beta = self.buckets as f64;
        match self.scale {
            Scale::Linear => (y - self.origin) * beta / self.extent,
            Scale::Log => beta * (1.0 + (y - self.origin)).ln() / (1.0 + self.extent).ln(),
        }
    }

    /// `y` clamped into `[v, v + l]`, or an error when clamping is disabled.
    pub fn check(&self, axis: &'static str, y: f64) -> Result<f64, AttainmentError> {
        let upper = self.origin + self.extent;
        if y.is_nan() || (!self.clamp && !(self.origin..=upper).contains(&y)) {
            return Err(AttainmentError::OutOfRange {
                axis,
                value: y,
                lower: self.origin,
                upper,
            });
        }
        Ok(y.clamp(self.origin, upper))
    }

    /// Bucket of `y` in `[0, β - 1]`.
    pub fn index(&self, y: f64) -> Result<usize, AttainmentError> {
        let y = self.check("value", y)?;
        Ok(self.index_of_clamped(y))
    }

    pub(crate) fn index_of_clamped(&self, y: f64) -> usize {
        let last = self.buckets - 1;
        let delta = self.continuous_index(y);
        match self.scale {
            Scale::Linear => {
                // Largest i with lower edge <= y.
                let mut i = (delta.floor().max(0.0) as usize).min(last);
                while i < last && self.representative(i + 1) <= y {
                    i += 1;
                }
                while i > 0 && self.representative(i) > y {
                    i -= 1;
                }
                i
            }
            Scale::Log => {
                // Smallest i with y <= upper edge.
                let mut i = ((delta.ceil() - 1.0).max(0.0) as usize).min(last);
                while i > 0 && y <= self.representative(i - 1) {
                    i -= 1;
                }
                while i < last && y > self.representative(i) {
                    i += 1;
                }
                i
            }
        }
    }

    /// `h(y)`: the representative of `y`'s bucket.
    pub fn discretize(&self, y: f64) -> Result<f64, AttainmentError> {
        Ok(self.representative(self.index(y)?))
    }
}

/// Time and quality axes of an attainment histogram.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    pub time: Axis,
    pub quality: Axis,
}

impl Discretization {
    pub fn new(time: Axis, quality: Axis) -> Self {
        Self { time, quality }
    }

    /// Axes spanning the observed bounds of `runs`: `v` is the minimum
    /// corner and `l` the extent (1 on a degenerate axis).
    pub fn fitted<T: Borrow<Trajectory>>(
        runs: &[T],
        buckets: (usize, usize),
        scales: (Scale, Scale),
    ) -> Result<Self, AttainmentError> {
        common_direction(runs)?;
        let mut points = runs.iter().flat_map(|r| r.borrow().points().iter().copied());
        let first = points.next().ok_or(AttainmentError::NoPoints)?;
        let init = (first.time, first.time, first.quality, first.quality);
        let (t_min, t_max, q_min, q_max) = points.fold(init, |(t0, t1, q0, q1), p| {
            (t0.min(p.time), t1.max(p.time), q0.min(p.quality), q1.max(p.quality))
        });
        let extent = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
        Ok(Self {
            time: Axis::new(buckets.0, t_min as f64, extent(t_min as f64, t_max as f64), scales.0)?,
            quality: Axis::new(buckets.1, q_min, extent(q_min, q_max), scales.1)?,
        })
    }
}
