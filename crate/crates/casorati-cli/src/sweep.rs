//! Rectangular coordinate grids.

use anyhow::{anyhow, bail, Context, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub coord: usize,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    /// Parses `NAME=LO:HI:COUNT`, where NAME is a coordinate name or index.
    pub fn parse(text: &str, coords: &[String]) -> Result<Self> {
        let (name, range) = text
            .split_once('=')
            .ok_or_else(|| anyhow!("grid `{text}` is not of the form NAME=LO:HI:COUNT"))?;
        let name = name.trim();
        let coord = match coords.iter().position(|c| c == name) {
            Some(i) => i,
            None => match name.parse::<usize>() {
                Ok(i) if i < coords.len() => i,
                _ => bail!("grid `{text}`: unknown coordinate `{name}`"),
            },
        };
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        let [lo, hi, count] = parts[..] else {
            bail!("grid `{text}` is not of the form NAME=LO:HI:COUNT");
        };
        let lo: f64 = lo.parse().with_context(|| format!("grid `{text}`: bad lower bound"))?;
        let hi: f64 = hi.parse().with_context(|| format!("grid `{text}`: bad upper bound"))?;
        let count: usize = count.parse().with_context(|| format!("grid `{text}`: bad count"))?;
        if !lo.is_finite() || !hi.is_finite() {
            bail!("grid `{text}`: bounds must be finite");
        }
        Ok(Axis { coord, lo, hi, count })
    }

    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.lo],
            n => (0..n)
                .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

/// Grid points in lexicographic order, the first axis varying slowest.
pub fn grid(base: &[f64], axes: &[Axis]) -> Vec<Vec<f64>> {
    let mut out = vec![base.to_vec()];
    for axis in axes {
        let values = axis.values();
        out = out
            .iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q[axis.coord] = v;
                    q
                })
            })
            .collect();
    }
    out
}
