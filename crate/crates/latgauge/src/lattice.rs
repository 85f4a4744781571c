//! Hypercubic lattice geometry with free boundaries: sites, nearest-neighbor
//! bonds, plaquettes, the enhanced temporal gauge tree, and the retained-bond
//! count that normalizes every bound in this crate.

use alloc::vec::Vec;

use smallvec::SmallVec;

use crate::{Error, Result};

/// Lattice geometry parameters: dimension d in {2,3,4}, L sites per side,
/// spacing a in (0, 1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSpec {
    d: usize,
    l: usize,
    a: f64,
}

impl LatticeSpec {
    pub fn new(d: usize, l: usize, a: f64) -> Result<Self> {
        if !(2..=4).contains(&d) {
            return Err(Error::InvalidParameter(alloc::format!(
                "dimension must be 2, 3, or 4, got {d}"
            )));
        }
        if l < 2 {
            return Err(Error::InvalidParameter(alloc::format!(
                "need at least 2 sites per side, got {l}"
            )));
        }
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "lattice spacing must lie in (0, 1], got {a}"
            )));
        }
        Ok(LatticeSpec { d, l, a })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn sites_per_side(&self) -> usize {
        self.l
    }

    pub fn spacing(&self) -> f64 {
        self.a
    }

    pub fn site_count(&self) -> usize {
        self.l.pow(self.d as u32)
    }

    pub fn bond_count(&self) -> usize {
        self.d * self.l.pow(self.d as u32 - 1) * (self.l - 1)
    }

    pub fn plaquette_count(&self) -> usize {
        let planes = self.d * (self.d - 1) / 2;
        planes * self.l.pow(self.d as u32 - 2) * (self.l - 1) * (self.l - 1)
    }

    /// Number of bonds in any spanning tree: one less than the site count.
    pub fn tree_size(&self) -> usize {
        self.site_count() - 1
    }
}

/// Lattice site with 1-based coordinates (x^0, ..., x^{d-1}); x^0 is time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Site {
    coords: SmallVec<[u32; 4]>,
}

impl Site {
    pub fn new(coords: &[u32]) -> Self {
        Site {
            coords: SmallVec::from_slice(coords),
        }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// The neighbor one step along axis `direction` (no bounds check).
    pub fn step(&self, direction: usize) -> Site {
        let mut coords = self.coords.clone();
        coords[direction] += 1;
        Site { coords }
    }
}

/// Undirected nearest-neighbor bond, stored from its lower endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bond {
    pub base: Site,
    pub direction: usize,
}

/// Minimal square in the (mu, nu) plane, mu < nu, anchored at its lowest
/// corner.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plaquette {
    pub base: Site,
    pub mu: usize,
    pub nu: usize,
}

impl Plaquette {
    /// The four sides in traversal order. The boolean marks sides traversed
    /// against their stored orientation, i.e. entering the holonomy inverted:
    /// base->mu, (base+mu)->nu, then back across (base+nu)->mu and base->nu.
    pub fn sides(&self) -> [(Bond, bool); 4] {
        let b1 = Bond {
            base: self.base.clone(),
            direction: self.mu,
        };
        let b2 = Bond {
            base: self.base.step(self.mu),
            direction: self.nu,
        };
        let b3 = Bond {
            base: self.base.step(self.nu),
            direction: self.mu,
        };
        let b4 = Bond {
            base: self.base.clone(),
            direction: self.nu,
        };
        [(b1, false), (b2, false), (b3, true), (b4, true)]
    }
}

/// All sites in lexicographic order (x^0 slowest, x^{d-1} fastest).
pub fn enumerate_sites(spec: &LatticeSpec) -> Vec<Site> {
    let d = spec.dimension();
    let l = spec.sites_per_side() as u32;
    let mut out = Vec::with_capacity(spec.site_count());
    let mut coords: SmallVec<[u32; 4]> = SmallVec::from_elem(1, d);
    loop {
        out.push(Site {
            coords: coords.clone(),
        });
        let mut axis = d;
        while axis > 0 {
            axis -= 1;
            if coords[axis] < l {
                coords[axis] += 1;
                for c in coords.iter_mut().skip(axis + 1) {
                    *c = 1;
                }
                break;
            }
            if axis == 0 {
                return out;
            }
        }
    }
}

fn site_index(spec: &LatticeSpec, site: &Site) -> usize {
    let l = spec.sites_per_side();
    let mut idx = 0;
    for &c in site.coords() {
        idx = idx * l + (c as usize - 1);
    }
    idx
}

/// All bonds, site-major then by direction; count d L^{d-1} (L-1).
pub fn enumerate_bonds(spec: &LatticeSpec) -> Vec<Bond> {
    let l = spec.sites_per_side() as u32;
    let mut out = Vec::with_capacity(spec.bond_count());
    for site in enumerate_sites(spec) {
        for direction in 0..spec.dimension() {
            if site.coords()[direction] < l {
                out.push(Bond {
                    base: site.clone(),
                    direction,
                });
            }
        }
    }
    out
}

/// All plaquettes, site-major then by plane (mu, nu) in lexicographic order;
/// count binom(d,2) L^{d-2} (L-1)^2.
pub fn enumerate_plaquettes(spec: &LatticeSpec) -> Vec<Plaquette> {
    let l = spec.sites_per_side() as u32;
    let mut out = Vec::with_capacity(spec.plaquette_count());
    for site in enumerate_sites(spec) {
        for mu in 0..spec.dimension() {
            for nu in (mu + 1)..spec.dimension() {
                if site.coords()[mu] < l && site.coords()[nu] < l {
                    out.push(Plaquette {
                        base: site.clone(),
                        mu,
                        nu,
                    });
                }
            }
        }
    }
    out
}

/// Whether a bond is gauged away in the enhanced temporal gauge: all temporal
/// bonds, plus bonds in spatial direction k whose earlier coordinates all sit
/// at 1 (the comb / scrub-brush construction on the initial slices).
pub fn in_enhanced_temporal_tree(bond: &Bond) -> bool {
    bond.base.coords()[..bond.direction]
        .iter()
        .all(|&c| c == 1)
}

/// The gauged-away bonds, in global bond enumeration order. The set is a
/// maximal tree: L^d - 1 bonds, acyclic, touching every site.
pub fn enhanced_temporal_tree(spec: &LatticeSpec) -> Vec<Bond> {
    enumerate_bonds(spec)
        .into_iter()
        .filter(in_enhanced_temporal_tree)
        .collect()
}

/// Retained-bond count after gauge fixing, from the closed forms
/// (L-1)^2, (2L+1)(L-1)^2, (3L^3 - L^2 - L - 1)(L-1) for d = 2, 3, 4.
pub fn retained_count(spec: &LatticeSpec) -> usize {
    let l = spec.sites_per_side();
    match spec.dimension() {
        2 => (l - 1) * (l - 1),
        3 => (2 * l + 1) * (l - 1) * (l - 1),
        4 => (3 * l * l * l - l * l - l - 1) * (l - 1),
        _ => unreachable!("spec construction enforces d in 2..=4"),
    }
}

/// Union-find check that `bonds` form a spanning tree of the lattice graph:
/// acyclic (no union ever joins an already-connected pair) and connected.
pub fn is_spanning_tree(spec: &LatticeSpec, bonds: &[Bond]) -> bool {
    let n = spec.site_count();
    if bonds.len() != n - 1 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for bond in bonds {
        let a = find(&mut parent, site_index(spec, &bond.base));
        let b = find(&mut parent, site_index(spec, &bond.base.step(bond.direction)));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (1..n).all(|i| find(&mut parent, i) == root)
}

/// Precomputed geometry: enumeration vectors plus O(1) bond lookup, shared by
/// the sampling and action code.
#[derive(Clone, Debug)]
pub struct Lattice {
    spec: LatticeSpec,
    sites: Vec<Site>,
    bonds: Vec<Bond>,
    plaquettes: Vec<Plaquette>,
    /// Map (site index, direction) -> bond slot, usize::MAX when the bond
    /// would leave the lattice.
    bond_slots: Vec<usize>,
    /// Bond slots fixed to the identity by the enhanced temporal gauge.
    tree_slots: Vec<bool>,
}

impl Lattice {
    pub fn new(spec: LatticeSpec) -> Self {
        let sites = enumerate_sites(&spec);
        let bonds = enumerate_bonds(&spec);
        let plaquettes = enumerate_plaquettes(&spec);
        let d = spec.dimension();
        let mut bond_slots = alloc::vec![usize::MAX; spec.site_count() * d];
        for (slot, bond) in bonds.iter().enumerate() {
            bond_slots[site_index(&spec, &bond.base) * d + bond.direction] = slot;
        }
        let tree_slots = bonds.iter().map(in_enhanced_temporal_tree).collect();
        Lattice {
            spec,
            sites,
            bonds,
            plaquettes,
            bond_slots,
            tree_slots,
        }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn site_index(&self, site: &Site) -> usize {
        site_index(&self.spec, site)
    }

    /// Slot of the bond leaving `site` along `direction`, if it exists.
    pub fn bond_slot(&self, site: &Site, direction: usize) -> Option<usize> {
        let idx = self.bond_slots[self.site_index(site) * self.spec.dimension() + direction];
        (idx != usize::MAX).then_some(idx)
    }

    pub fn is_tree_slot(&self, slot: usize) -> bool {
        self.tree_slots[slot]
    }

    pub fn retained_count(&self) -> usize {
        retained_count(&self.spec)
    }

    /// Bond slots of the four sides of a plaquette with inversion flags,
    /// in holonomy order.
    pub fn plaquette_slots(&self, p: &Plaquette) -> [(usize, bool); 4] {
        let sides = p.sides();
        let mut out = [(0usize, false); 4];
        for (i, (bond, inverted)) in sides.iter().enumerate() {
            let slot = self
                .bond_slot(&bond.base, bond.direction)
                .expect("plaquette side must be a lattice bond");
            out[i] = (slot, *inverted);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: usize, l: usize) -> LatticeSpec {
        LatticeSpec::new(d, l, 1.0).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(LatticeSpec::new(1, 2, 1.0).is_err());
        assert!(LatticeSpec::new(5, 2, 1.0).is_err());
        assert!(LatticeSpec::new(2, 1, 1.0).is_err());
        assert!(LatticeSpec::new(2, 2, 0.0).is_err());
        assert!(LatticeSpec::new(2, 2, 1.5).is_err());
        assert!(LatticeSpec::new(2, 2, f64::NAN).is_err());
        assert!(LatticeSpec::new(4, 8, 0.1).is_ok());
    }

    #[test]
    fn bond_counts_match_formula_and_hand_counts() {
        assert_eq!(enumerate_bonds(&spec(2, 2)).len(), 4);
        assert_eq!(enumerate_bonds(&spec(3, 2)).len(), 12);
        assert_eq!(enumerate_bonds(&spec(2, 3)).len(), 12);
        for d in 2..=4 {
            for l in 2..=5 {
                let s = spec(d, l);
                assert_eq!(enumerate_bonds(&s).len(), s.bond_count());
            }
        }
    }

    #[test]
    fn plaquette_counts_match_formula_and_hand_counts() {
        assert_eq!(enumerate_plaquettes(&spec(2, 2)).len(), 1);
        assert_eq!(enumerate_plaquettes(&spec(3, 2)).len(), 6);
        assert_eq!(enumerate_plaquettes(&spec(4, 2)).len(), 24);
        for d in 2..=4 {
            for l in 2..=5 {
                let s = spec(d, l);
                assert_eq!(enumerate_plaquettes(&s).len(), s.plaquette_count());
            }
        }
    }

    #[test]
    fn site_enumeration_is_lexicographic_and_indexable() {
        let s = spec(3, 3);
        let sites = enumerate_sites(&s);
        assert_eq!(sites.len(), 27);
        assert_eq!(sites[0].coords(), &[1, 1, 1]);
        assert_eq!(sites[1].coords(), &[1, 1, 2]);
        assert_eq!(sites[26].coords(), &[3, 3, 3]);
        for (i, site) in sites.iter().enumerate() {
            assert_eq!(site_index(&s, site), i);
        }
    }

    #[test]
    fn tree_matches_hand_construction_on_smallest_square() {
        // 2x2 lattice: both temporal bonds plus the spatial bond at x^0 = 1.
        let tree = enhanced_temporal_tree(&spec(2, 2));
        assert_eq!(tree.len(), 3);
        assert!(tree.contains(&Bond {
            base: Site::new(&[1, 1]),
            direction: 0
        }));
        assert!(tree.contains(&Bond {
            base: Site::new(&[1, 2]),
            direction: 0
        }));
        assert!(tree.contains(&Bond {
            base: Site::new(&[1, 1]),
            direction: 1
        }));
    }

    #[test]
    fn tree_is_maximal_spanning_tree() {
        for d in 2..=4 {
            for l in 2..=4 {
                let s = spec(d, l);
                let tree = enhanced_temporal_tree(&s);
                assert_eq!(tree.len(), s.tree_size(), "d={d} l={l}");
                assert!(is_spanning_tree(&s, &tree), "d={d} l={l}");
                // Adding any non-tree bond must close a loop.
                for bond in enumerate_bonds(&s) {
                    if tree.contains(&bond) {
                        continue;
                    }
                    let mut extended = tree.clone();
                    extended.push(bond);
                    assert!(!is_spanning_tree(&s, &extended));
                }
            }
        }
    }

    #[test]
    fn retained_count_closed_forms() {
        assert_eq!(retained_count(&spec(2, 3)), 4);
        assert_eq!(retained_count(&spec(3, 2)), 5);
        assert_eq!(retained_count(&spec(4, 2)), 17);
    }

    #[test]
    fn retained_count_equals_bonds_minus_tree() {
        for d in 2..=4 {
            for l in 2..=8 {
                let s = spec(d, l);
                assert_eq!(
                    retained_count(&s),
                    s.bond_count() - s.tree_size(),
                    "d={d} l={l}"
                );
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let s = spec(3, 3);
        assert_eq!(enumerate_bonds(&s), enumerate_bonds(&s));
        assert_eq!(enumerate_plaquettes(&s), enumerate_plaquettes(&s));
    }

    #[test]
    fn bond_appears_in_at_most_two_per_transverse_direction_plaquettes() {
        for d in 2..=4 {
            let s = spec(d, 3);
            let lattice = Lattice::new(s);
            let mut membership = alloc::vec![0usize; lattice.bonds().len()];
            for p in lattice.plaquettes() {
                for (slot, _) in lattice.plaquette_slots(p) {
                    membership[slot] += 1;
                }
            }
            let cap = 2 * (d - 1);
            assert!(membership.iter().all(|&m| m <= cap), "d={d}");
            assert!(membership.iter().any(|&m| m == cap), "d={d} cap unreached");
        }
    }

    #[test]
    fn plaquette_sides_traverse_the_square() {
        let p = Plaquette {
            base: Site::new(&[1, 1]),
            mu: 0,
            nu: 1,
        };
        let sides = p.sides();
        assert_eq!(sides[0].0.base.coords(), &[1, 1]);
        assert_eq!(sides[0].0.direction, 0);
        assert!(!sides[0].1);
        assert_eq!(sides[1].0.base.coords(), &[2, 1]);
        assert_eq!(sides[1].0.direction, 1);
        assert_eq!(sides[2].0.base.coords(), &[1, 2]);
        assert_eq!(sides[2].0.direction, 0);
        assert!(sides[2].1);
        assert_eq!(sides[3].0.base.coords(), &[1, 1]);
        assert_eq!(sides[3].0.direction, 1);
        assert!(sides[3].1);
    }

    #[test]
    fn lattice_cache_agrees_with_enumerations() {
        let s = spec(3, 2);
        let lattice = Lattice::new(s);
        assert_eq!(lattice.bonds().len(), 12);
        assert_eq!(lattice.plaquettes().len(), 6);
        let tree_count = (0..lattice.bonds().len())
            .filter(|&i| lattice.is_tree_slot(i))
            .count();
        assert_eq!(tree_count, 7);
        assert_eq!(lattice.retained_count(), 5);
        // Every bond is reachable through its slot.
        for (slot, bond) in lattice.bonds().iter().enumerate() {
            assert_eq!(lattice.bond_slot(&bond.base, bond.direction), Some(slot));
        }
        // Out-of-lattice lookups return None.
        let corner = Site::new(&[2, 2, 2]);
        assert_eq!(lattice.bond_slot(&corner, 0), None);
    }
}
