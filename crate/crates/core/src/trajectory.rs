use crate::sequence::{SequenceInfo, Variant};

/// Provenance recorded with every trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub model_id: String,
    pub seed: u64,
    pub replicate: u64,
    pub variant: Variant,
    pub y0: Vec<f64>,
}

impl TrajectoryMeta {
    pub fn from_info(info: &SequenceInfo, y0: &[f64]) -> Self {
        Self {
            model_id: info.model_id.clone(),
            seed: info.seed,
            replicate: info.replicate,
            variant: info.variant,
            y0: y0.to_vec(),
        }
    }
}

/// States `y_{t0}, y_{t0+1}, …` of a recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t0: i64,
    pub states: Vec<Vec<f64>>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Last time index covered.
    pub fn t_end(&self) -> i64 {
        self.t0 + self.states.len() as i64 - 1
    }

    pub fn at(&self, t: i64) -> Option<&[f64]> {
        let k = usize::try_from(t - self.t0).ok()?;
        self.states.get(k).map(Vec::as_slice)
    }

    pub fn times(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.states.len() as i64).map(move |k| self.t0 + k)
    }

    /// First coordinate of every state.
    pub fn scalar_path(&self) -> Vec<f64> {
        self.states.iter().map(|s| s[0]).collect()
    }

    /// Hash of the time range and state bits.
    pub fn fingerprint(&self) -> u64 {
        let words = std::iter::once(self.t0 as u64)
            .chain(self.states.iter().flatten().map(|v| v.to_bits()));
        fnv1a(words)
    }
}

pub(crate) fn fnv1a(words: impl IntoIterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}
