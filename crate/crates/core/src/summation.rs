//! Compensated and log-domain accumulation.

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Pairwise reduction with a fixed split, so the result only depends on
/// the order of `values`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().copied().collect::<Neumaier>().value();
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Sums positive terms given by their logarithms.
///
/// Terms are scaled by a running reference `exp(shift)` that only moves when a
/// new term dominates by more than `e^300`, so typically no rescaling happens
/// and the sum keeps full compensated accuracy.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    shift: f64,
    acc: Neumaier,
}

impl Default for LogSum {
    fn default() -> Self {
        Self {
            shift: f64::NEG_INFINITY,
            acc: Neumaier::new(),
        }
    }
}

impl LogSum {
    const HEADROOM: f64 = 300.0;

    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add_ln(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if self.shift == f64::NEG_INFINITY {
            self.shift = ln_term;
        } else if ln_term > self.shift + Self::HEADROOM {
            let scale = (self.shift - ln_term).exp();
            let v = self.acc.value() * scale;
            self.acc = Neumaier::new();
            self.acc.add(v);
            self.shift = ln_term;
        }
        self.acc.add((ln_term - self.shift).exp());
    }

    /// Natural log of the accumulated sum; `-inf` when empty.
    pub fn ln_value(&self) -> f64 {
        if self.shift == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        self.shift + self.acc.value().ln()
    }
}
