use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Closed interval with finite endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Precondition(format!("non-finite interval [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(Error::Precondition(format!("interval with lo {lo} > hi {hi}")));
        }
        Ok(Interval { lo, hi })
    }

    /// `centre ± half_width`.
    pub fn symmetric(centre: f64, half_width: f64) -> Result<Self> {
        Interval::new(centre - half_width, centre + half_width)
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Finite union of closed intervals, stored as sorted disjoint components.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalUnion {
    components: Vec<Interval>,
}

impl IntervalUnion {
    /// Merges overlapping and touching intervals.
    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut all: Vec<Interval> = intervals.into_iter().collect();
        all.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut components: Vec<Interval> = Vec::with_capacity(all.len());
        for iv in all {
            match components.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => components.push(iv),
            }
        }
        IntervalUnion { components }
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Smallest interval containing the union.
    pub fn hull(&self) -> Option<Interval> {
        let first = self.components.first()?;
        let last = self.components.last()?;
        Some(Interval {
            lo: first.lo,
            hi: last.hi,
        })
    }

    /// Lebesgue measure of the union.
    pub fn total_length(&self) -> f64 {
        self.components.iter().map(Interval::length).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        let k = self.components.partition_point(|c| c.hi < x);
        self.components.get(k).is_some_and(|c| c.contains(x))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::from_intervals(self.components.iter().chain(&other.components).copied())
    }
}

#[derive(Serialize, Deserialize)]
struct UnionRepr {
    components: Vec<Interval>,
    hull: Option<Interval>,
    total_length: f64,
}

impl Serialize for IntervalUnion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        UnionRepr {
            components: self.components.clone(),
            hull: self.hull(),
            total_length: self.total_length(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = UnionRepr::deserialize(d)?;
        Ok(IntervalUnion::from_intervals(repr.components))
    }
}
