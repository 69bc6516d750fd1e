//! Exact unions of half-open arcs on the circle R/Z, stored as disjoint,
//! non-touching, sorted arcs inside the fundamental domain [0,1). A pair of
//! arcs meeting at the wrap point (one ending at 1, one starting at 0) is a
//! single circular component.

use crate::numeric::{rat_floor, Rat};
use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet {
    /// sorted, pairwise disjoint, non-touching; 0 <= lo < hi <= 1
    arcs: Vec<(Rat, Rat)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet { arcs: vec![(Rat::zero(), Rat::one())] }
    }

    /// Build from raw arcs (lo, hi) with lo < hi, interpreted mod 1.
    /// Arcs of length >= 1 cover the whole circle.
    pub fn from_raw_arcs(raw: Vec<(Rat, Rat)>) -> Self {
        let one = Rat::one();
        let mut pieces: Vec<(Rat, Rat)> = Vec::with_capacity(raw.len() + 4);
        for (lo, hi) in raw {
            assert!(lo < hi, "arc endpoints must be increasing");
            if &hi - &lo >= one {
                return IntervalSet::full();
            }
            let shift = Rat::from_integer(rat_floor(&lo));
            let lo = &lo - &shift;
            let hi = &hi - &shift;
            if hi <= one {
                pieces.push((lo, hi));
            } else {
                pieces.push((lo, one.clone()));
                pieces.push((Rat::zero(), &hi - &one));
            }
        }
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Rat, Rat)> = Vec::with_capacity(pieces.len());
        for (lo, hi) in pieces {
            match merged.last_mut() {
                Some((_, phi)) if lo <= *phi => {
                    if hi > *phi {
                        *phi = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        if merged.len() == 1 && merged[0].0.is_zero() && merged[0].1.is_one() {
            return IntervalSet::full();
        }
        IntervalSet { arcs: merged }
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].0.is_zero() && self.arcs[0].1.is_one()
    }

    pub fn arcs(&self) -> &[(Rat, Rat)] {
        &self.arcs
    }

    fn wraps(&self) -> bool {
        self.arcs.len() >= 2
            && self.arcs.first().unwrap().0.is_zero()
            && self.arcs.last().unwrap().1.is_one()
    }

    /// Connected components as (lo, hi) with lo in [0,1) and hi <= lo + 1.
    /// A wrap component is reported once, with hi > 1.
    pub fn components(&self) -> Vec<(Rat, Rat)> {
        if self.arcs.is_empty() {
            return Vec::new();
        }
        if !self.wraps() {
            return self.arcs.clone();
        }
        let first = self.arcs.first().unwrap();
        let last = self.arcs.last().unwrap();
        let mut comps: Vec<(Rat, Rat)> = self.arcs[1..self.arcs.len() - 1].to_vec();
        comps.push((last.0.clone(), &first.1 + Rat::one()));
        comps
    }

    pub fn component_count(&self) -> usize {
        if self.arcs.is_empty() {
            0
        } else if self.wraps() {
            self.arcs.len() - 1
        } else {
            self.arcs.len()
        }
    }

    pub fn total_length(&self) -> Rat {
        self.arcs.iter().fold(Rat::zero(), |acc, (lo, hi)| acc + (hi - lo))
    }

    /// Components of `self` entirely contained in a single component of
    /// `parent` (circular containment).
    pub fn retained_within(&self, parent: &IntervalSet) -> IntervalSet {
        if parent.is_full() {
            return self.clone();
        }
        // Parent components, plus +1 shifts so wrap queries are linear scans.
        let mut pcomps = parent.components();
        let shifted: Vec<(Rat, Rat)> = pcomps
            .iter()
            .map(|(lo, hi)| (lo + Rat::one(), hi + Rat::one()))
            .collect();
        pcomps.extend(shifted);
        pcomps.sort_by(|a, b| a.0.cmp(&b.0));
        let covered = |lo: &Rat, hi: &Rat| -> bool {
            // find last parent with start <= lo
            let mut idx = pcomps.partition_point(|(plo, _)| plo <= lo);
            if idx == 0 {
                return false;
            }
            idx -= 1;
            &pcomps[idx].1 >= hi
        };
        let mut kept: Vec<(Rat, Rat)> = Vec::new();
        for (lo, hi) in self.components() {
            if covered(&lo, &hi) {
                kept.push((lo, hi));
            }
        }
        IntervalSet::from_raw_arcs(kept)
    }

    /// Does any component intersect the closed arc [lo, hi] (mod 1, hi may
    /// exceed 1 to encode wrap)? Touching counts as intersecting.
    pub fn component_indices_touching(&self, lo: &Rat, hi: &Rat) -> Vec<usize> {
        let comps = self.components();
        let one = Rat::one();
        let mut out = Vec::new();
        for (i, (a, b)) in comps.iter().enumerate() {
            // compare in the three relevant integer shifts
            for shift in [-1i64, 0, 1] {
                let s = Rat::from_integer(BigInt::from(shift));
                let a2 = a + &s;
                let b2 = b + &s;
                if &a2 <= hi && &b2 >= lo {
                    out.push(i);
                    break;
                }
            }
        }
        let _ = one;
        out
    }

    /// Count grid cells [k*delta, (k+1)*delta) hit by the set, exactly.
    pub fn count_boxes(&self, delta: &Rat) -> u64 {
        assert!(delta.is_positive());
        if self.arcs.is_empty() {
            return 0;
        }
        if delta >= &Rat::one() {
            return 1;
        }
        // total number of cells covering [0,1)
        let k_total = {
            let inv = Rat::one() / delta;
            let f = rat_floor(&inv);
            let exact = Rat::from_integer(f.clone()) == inv;
            let total = if exact { f } else { f + BigInt::one() };
            total.to_u64().expect("cell count fits u64")
        };
        let mut ranges: Vec<(u64, u64)> = Vec::new();
        for (lo, hi) in self.components() {
            // cells k with k*delta < hi and (k+1)*delta > lo
            let k_min = rat_floor(&(&lo / delta)).to_u64().unwrap();
            let q = &hi / delta;
            let fq = rat_floor(&q);
            let k_max_raw = if Rat::from_integer(fq.clone()) == q {
                fq - BigInt::one()
            } else {
                fq
            };
            let k_max = k_max_raw.to_u64().unwrap();
            if k_max < k_total {
                ranges.push((k_min, k_max));
            } else {
                // wrap component: split
                ranges.push((k_min, k_total - 1));
                ranges.push((0, k_max - k_total));
            }
        }
        ranges.sort_unstable();
        let mut count = 0u64;
        let mut cur: Option<(u64, u64)> = None;
        for (a, b) in ranges {
            match cur {
                Some((ca, cb)) if a <= cb + 1 => {
                    cur = Some((ca, cb.max(b)));
                }
                Some((_, cb0)) => {
                    count += cb0 - cur.unwrap().0 + 1;
                    cur = Some((a, b));
                }
                None => cur = Some((a, b)),
            }
        }
        if let Some((ca, cb)) = cur {
            count += cb - ca + 1;
        }
        count.min(k_total)
    }
}
