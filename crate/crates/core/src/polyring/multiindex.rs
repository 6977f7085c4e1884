//! Finitely supported exponent tuples over the basis.

use std::cmp::Ordering;

/// A finitely supported tuple of nonnegative exponents, indexed by basis
/// position. Zero entries are never stored.
///
/// This is both the exponent of a monomial `B^alpha` and the index `beta`
/// of a differential operator `D^beta`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    // Sorted by position, exponents strictly positive.
    entries: Vec<(u32, u32)>,
}

impl MultiIndex {
    pub fn zero() -> Self {
        MultiIndex::default()
    }

    /// The unit index `e_pos`.
    pub fn unit(position: u32) -> Self {
        MultiIndex {
            entries: vec![(position, 1)],
        }
    }

    /// Builds an index from arbitrary (position, exponent) pairs; repeated
    /// positions are summed and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for (pos, exp) in pairs {
            if exp > 0 {
                *map.entry(pos).or_insert(0u32) += exp;
            }
        }
        MultiIndex {
            entries: map.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn get(&self, position: u32) -> u32 {
        match self.entries.binary_search_by_key(&position, |&(p, _)| p) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    /// The order `|beta|`, i.e. the sum of all exponents.
    pub fn order(&self) -> u64 {
        self.entries.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries.iter().copied()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&(p, _)| p)
    }

    pub fn max_position(&self) -> Option<u32> {
        self.entries.last().map(|&(p, _)| p)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex::from_pairs(self.iter().chain(other.iter()))
    }

    /// Componentwise subtraction; `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.entries.len());
        for &(pos, exp) in &self.entries {
            let oexp = other.get(pos);
            if oexp > exp {
                return None;
            }
            if exp - oexp > 0 {
                out.push((pos, exp - oexp));
            }
        }
        // Every position of `other` must be covered by `self`.
        if other.iter().any(|(pos, oexp)| oexp > self.get(pos)) {
            return None;
        }
        Some(MultiIndex { entries: out })
    }

    /// Componentwise `<=`, i.e. `self` divides the monomial of `other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.entries.iter().all(|&(pos, exp)| exp <= other.get(pos))
    }

    /// Componentwise maximum (the lcm of the two monomials).
    pub fn sup(&self, other: &MultiIndex) -> MultiIndex {
        let mut map: std::collections::BTreeMap<u32, u32> = self.entries.iter().copied().collect();
        for (pos, exp) in other.iter() {
            let e = map.entry(pos).or_insert(0);
            *e = (*e).max(exp);
        }
        MultiIndex {
            entries: map.into_iter().collect(),
        }
    }

    /// True when the supports are disjoint (the monomial gcd is 1).
    pub fn disjoint(&self, other: &MultiIndex) -> bool {
        self.support().all(|p| other.get(p) == 0)
    }

    /// Keeps only the positions for which `keep` holds.
    pub fn restrict<F: Fn(u32) -> bool>(&self, keep: F) -> MultiIndex {
        MultiIndex {
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|&(p, _)| keep(p))
                .collect(),
        }
    }

    pub fn scale(&self, factor: u32) -> MultiIndex {
        if factor == 0 {
            return MultiIndex::zero();
        }
        MultiIndex {
            entries: self.entries.iter().map(|&(p, e)| (p, e * factor)).collect(),
        }
    }

    /// Componentwise division with remainder by `d`: returns `(q, rho)`
    /// with `self = d*q + rho` and every entry of `rho` in `[0, d)`.
    pub fn div_mod(&self, d: u32) -> (MultiIndex, MultiIndex) {
        let mut q = Vec::new();
        let mut r = Vec::new();
        for &(pos, exp) in &self.entries {
            if exp / d > 0 {
                q.push((pos, exp / d));
            }
            if exp % d > 0 {
                r.push((pos, exp % d));
            }
        }
        (MultiIndex { entries: q }, MultiIndex { entries: r })
    }
}

// Lexicographic by position, missing entries read as zero, earlier
// positions more significant. Any total order consistent with equality
// would do; this one keeps term iteration deterministic.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.entries.iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&&(pa, ea)), Some(&&(pb, eb))) => {
                    match pa.cmp(&pb) {
                        // Lower position present only on one side: that side
                        // has a positive exponent where the other has zero.
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(&eb) {
                            Ordering::Equal => {
                                a.next();
                                b.next();
                            }
                            ord => return ord,
                        },
                    }
                }
            }
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All multi-indices `beta` with `beta[pos] <= cap` for each `(pos, cap)`
/// in `caps` and `|beta| <= total_cap`, sorted by order and then
/// lexicographically. Positions absent from `caps` stay zero.
pub fn multiindices_bounded(caps: &[(u32, u32)], total_cap: u64) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current: Vec<(u32, u32)> = Vec::new();
    fn rec(
        caps: &[(u32, u32)],
        remaining: u64,
        current: &mut Vec<(u32, u32)>,
        out: &mut Vec<MultiIndex>,
    ) {
        match caps.split_first() {
            None => out.push(MultiIndex::from_pairs(current.iter().copied())),
            Some((&(pos, cap), rest)) => {
                let max_here = (cap as u64).min(remaining) as u32;
                for e in 0..=max_here {
                    if e > 0 {
                        current.push((pos, e));
                    }
                    rec(rest, remaining - e as u64, current, out);
                    if e > 0 {
                        current.pop();
                    }
                }
            }
        }
    }
    rec(caps, total_cap, &mut current, &mut out);
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    out
}
