//! Truncated fixed-N Fock basis.
//!
//! States are occupation vectors `(n_1, …, n_M)` with `Σ n_i = N` and
//! `n_i ≤ n_max`, ordered lexicographically from `(N, 0, …)` down to
//! `(…, 0, N)`. Positions are computed by combinatorial ranking, so lookup
//! needs no hash table.

use crate::error::{Error, Result};

/// Upper bound on the number of stored occupation entries (`dim × M`).
const MAX_STORED: usize = 1 << 31;

#[derive(Debug, Clone)]
pub struct FockBasis {
    num_sites: usize,
    num_particles: usize,
    cap: usize,
    /// Flattened occupations, `num_sites` entries per state.
    occupations: Vec<u8>,
    /// `completions[s][p]`: ways to put `p` bosons on `s` sites under the cap.
    completions: Vec<Vec<usize>>,
}

impl FockBasis {
    pub fn new(num_sites: usize, num_particles: usize, cap: usize) -> Result<Self> {
        if num_sites == 0 || num_particles == 0 {
            return Err(Error::invalid("basis", "need at least one site and one particle"));
        }
        if cap > u8::MAX as usize {
            return Err(Error::invalid("max_occupancy", format!("cap {cap} exceeds {}", u8::MAX)));
        }
        if num_particles > num_sites * cap {
            return Err(Error::EmptySector { sites: num_sites, particles: num_particles, cap });
        }
        let completions = completion_table(num_sites, num_particles, cap)?;
        let dim = completions[num_sites][num_particles];
        if dim.saturating_mul(num_sites) > MAX_STORED {
            return Err(Error::DimensionOverCap { dim, cap: MAX_STORED / num_sites });
        }

        let mut occupations = Vec::with_capacity(dim * num_sites);
        let mut current = vec![0u8; num_sites];
        fill(&mut occupations, &mut current, 0, num_particles, cap);
        debug_assert_eq!(occupations.len(), dim * num_sites);

        Ok(Self { num_sites, num_particles, cap, occupations, completions })
    }

    pub fn dim(&self) -> usize {
        self.occupations.len() / self.num_sites
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn num_particles(&self) -> usize {
        self.num_particles
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn state(&self, index: usize) -> &[u8] {
        &self.occupations[index * self.num_sites..(index + 1) * self.num_sites]
    }

    pub fn occupation(&self, index: usize, site: usize) -> u8 {
        self.occupations[index * self.num_sites + site]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.occupations.chunks_exact(self.num_sites)
    }

    /// Position of an occupation vector, or `None` if it is outside the basis.
    pub fn lookup(&self, state: &[u8]) -> Option<usize> {
        if state.len() != self.num_sites {
            return None;
        }
        let mut remaining = self.num_particles;
        let mut index = 0;
        for (site, &n) in state.iter().enumerate() {
            let n = n as usize;
            if n > self.cap || n > remaining {
                return None;
            }
            let tail = &self.completions[self.num_sites - site - 1];
            for v in (n + 1)..=self.cap.min(remaining) {
                index += tail[remaining - v];
            }
            remaining -= n;
        }
        (remaining == 0).then_some(index)
    }
}

fn completion_table(num_sites: usize, num_particles: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let mut table = vec![vec![0usize; num_particles + 1]; num_sites + 1];
    table[0][0] = 1;
    for s in 1..=num_sites {
        for p in 0..=num_particles {
            let mut total = 0usize;
            for v in 0..=cap.min(p) {
                total = total
                    .checked_add(table[s - 1][p - v])
                    .ok_or_else(|| Error::invalid("basis", "dimension overflows usize"))?;
            }
            table[s][p] = total;
        }
    }
    Ok(table)
}

fn fill(out: &mut Vec<u8>, current: &mut [u8], site: usize, remaining: usize, cap: usize) {
    let sites_left = current.len() - site;
    if sites_left == 1 {
        if remaining <= cap {
            current[site] = remaining as u8;
            out.extend_from_slice(current);
        }
        return;
    }
    // Later sites can hold at most `cap · (sites_left − 1)` bosons.
    let floor = remaining.saturating_sub(cap * (sites_left - 1));
    for n in (floor..=cap.min(remaining)).rev() {
        current[site] = n as u8;
        fill(out, current, site + 1, remaining - n, cap);
    }
    current[site] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_sites_two_bosons() {
        let b = FockBasis::new(2, 2, 4).unwrap();
        let states: Vec<_> = b.iter().map(|s| s.to_vec()).collect();
        assert_eq!(states, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let capped = FockBasis::new(2, 2, 1).unwrap();
        assert_eq!(capped.dim(), 1);
        assert_eq!(capped.state(0), &[1, 1]);
    }

    #[test]
    fn empty_sector_rejected() {
        assert_eq!(FockBasis::new(2, 5, 2).unwrap_err(), Error::EmptySector { sites: 2, particles: 5, cap: 2 });
    }

    #[test]
    fn lookup_rejects_foreign_vectors() {
        let b = FockBasis::new(4, 4, 2).unwrap();
        assert_eq!(b.lookup(&[3, 1, 0, 0]), None);
        assert_eq!(b.lookup(&[1, 1, 1, 0]), None);
        assert_eq!(b.lookup(&[1, 1, 1]), None);
        assert_eq!(b.lookup(&[2, 2, 0, 0]), Some(0));
    }

    proptest! {
        #[test]
        fn lookup_inverts_enumeration(m in 2usize..7, n in 1usize..9, cap in 1usize..5) {
            prop_assume!(n <= m * cap);
            let b = FockBasis::new(m, n, cap).unwrap();
            for (i, s) in b.iter().enumerate() {
                prop_assert_eq!(b.lookup(s), Some(i));
                prop_assert_eq!(s.iter().map(|&x| x as usize).sum::<usize>(), n);
                prop_assert!(s.iter().all(|&x| x as usize <= cap));
            }
            let ordered = b.iter().collect::<Vec<_>>().windows(2).all(|w| w[0] > w[1]);
            prop_assert!(ordered);
        }
    }
}
