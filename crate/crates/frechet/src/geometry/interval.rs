/// A possibly-empty closed subinterval of one oriented curve edge, given by
/// parameters in `[0, 1]`. Both bounds are present or the interval is empty;
/// when present, `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeInterval {
    span: Option<(f64, f64)>,
}

impl EdgeInterval {
    pub const EMPTY: EdgeInterval = EdgeInterval { span: None };

    pub fn new(lo: f64, hi: f64) -> EdgeInterval {
        assert!(lo <= hi, "interval bounds out of order: {lo} > {hi}");
        EdgeInterval {
            span: Some((lo, hi)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.span.is_none()
    }

    pub fn lo(&self) -> Option<f64> {
        self.span.map(|(lo, _)| lo)
    }

    pub fn hi(&self) -> Option<f64> {
        self.span.map(|(_, hi)| hi)
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.span
    }

    pub fn contains(&self, t: f64) -> bool {
        matches!(self.span, Some((lo, hi)) if lo <= t && t <= hi)
    }

    /// True if `self` is a subset of `other` (the empty interval is a subset
    /// of everything).
    pub fn subset_of(&self, other: &EdgeInterval) -> bool {
        match (self.span, other.span) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((a, b)), Some((c, d))) => c <= a && b <= d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_interval_contains_nothing() {
        assert!(!EdgeInterval::EMPTY.contains(0.0));
        assert!(EdgeInterval::EMPTY.is_empty());
    }

    #[test]
    fn closed_containment() {
        let i = EdgeInterval::new(0.25, 0.75);
        assert!(i.contains(0.25) && i.contains(0.75) && i.contains(0.5));
        assert!(!i.contains(0.249) && !i.contains(0.751));
    }

    #[test]
    #[should_panic]
    fn inverted_bounds_panic() {
        let _ = EdgeInterval::new(0.8, 0.2);
    }
}
