//! Gauge field configurations, the Wilson plaquette action, gauge
//! transformations, and reproducible Monte Carlo estimators of the partition
//! function, both over all bonds and in the enhanced temporal gauge.

use alloc::vec::Vec;

use rand::Rng;

use crate::group::{self, GroupKind, UnitaryMatrix};
use crate::lattice::{Lattice, LatticeSpec, Plaquette};
use crate::math;
use crate::mc::{self, BlockSum, McEstimate, SeededRandomStream};
use crate::{Error, Result};

/// Physics parameters of one partition-function evaluation. The action
/// prefactor is c = a^{d-4} / g^2; the `zero_coupling` constructor pins
/// c = 0 exactly (the infinite-coupling surrogate where Z = 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionParams {
    spec: LatticeSpec,
    kind: GroupKind,
    gsq: f64,
    g0sq: f64,
    zero_coupling: bool,
}

impl ActionParams {
    pub fn new(spec: LatticeSpec, kind: GroupKind, gsq: f64, g0sq: f64) -> Result<Self> {
        if !(g0sq.is_finite() && g0sq > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "coupling cap g0^2 must be positive and finite, got {g0sq}"
            )));
        }
        if !(gsq > 0.0 && gsq <= g0sq) {
            return Err(Error::InvalidParameter(alloc::format!(
                "coupling g^2 must lie in (0, g0^2 = {g0sq}], got {gsq}"
            )));
        }
        if kind.order() == 0 {
            return Err(Error::InvalidParameter("unsupported group: order 0".into()));
        }
        Ok(ActionParams {
            spec,
            kind,
            gsq,
            g0sq,
            zero_coupling: false,
        })
    }

    /// Parameters with the prefactor forced to zero: the integrand is
    /// identically 1 and Z = 1 exactly.
    pub fn zero_coupling(spec: LatticeSpec, kind: GroupKind) -> Result<Self> {
        if kind.order() == 0 {
            return Err(Error::InvalidParameter("unsupported group: order 0".into()));
        }
        Ok(ActionParams {
            spec,
            kind,
            gsq: 1.0,
            g0sq: 1.0,
            zero_coupling: true,
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn gsq(&self) -> f64 {
        self.gsq
    }

    pub fn g0sq(&self) -> f64 {
        self.g0sq
    }

    pub fn is_zero_coupling(&self) -> bool {
        self.zero_coupling
    }

    /// Action prefactor c = a^{d-4} / g^2 (0 for the zero-coupling surrogate).
    pub fn prefactor(&self) -> f64 {
        if self.zero_coupling {
            return 0.0;
        }
        let a = self.spec.spacing();
        let d = self.spec.dimension() as f64;
        math::powf(a, d - 4.0) / self.gsq
    }
}

/// A gauge field: one group element per lattice bond, stored in bond
/// enumeration order.
#[derive(Clone, Debug)]
pub struct GaugeConfig<'a> {
    lattice: &'a Lattice,
    kind: GroupKind,
    bonds: Vec<UnitaryMatrix>,
}

impl<'a> GaugeConfig<'a> {
    pub fn identity(lattice: &'a Lattice, kind: GroupKind) -> Result<Self> {
        let id = UnitaryMatrix::identity(kind)?;
        Ok(GaugeConfig {
            lattice,
            kind,
            bonds: alloc::vec![id; lattice.bonds().len()],
        })
    }

    /// Independent Haar element on every bond.
    pub fn random<R: Rng + ?Sized>(
        lattice: &'a Lattice,
        kind: GroupKind,
        rng: &mut R,
    ) -> Result<Self> {
        let mut config = Self::identity(lattice, kind)?;
        for slot in 0..config.bonds.len() {
            config.bonds[slot] = group::haar_sample(kind, rng)?;
        }
        Ok(config)
    }

    /// Haar elements on retained bonds only; tree bonds stay at the identity
    /// (the enhanced temporal gauge).
    pub fn random_gauge_fixed<R: Rng + ?Sized>(
        lattice: &'a Lattice,
        kind: GroupKind,
        rng: &mut R,
    ) -> Result<Self> {
        let mut config = Self::identity(lattice, kind)?;
        for slot in 0..config.bonds.len() {
            if !lattice.is_tree_slot(slot) {
                config.bonds[slot] = group::haar_sample(kind, rng)?;
            }
        }
        Ok(config)
    }

    pub fn lattice(&self) -> &Lattice {
        self.lattice
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn bond(&self, slot: usize) -> &UnitaryMatrix {
        &self.bonds[slot]
    }

    pub fn set_bond(&mut self, slot: usize, value: UnitaryMatrix) -> Result<()> {
        if value.kind() != self.kind {
            return Err(Error::InvalidParameter(alloc::format!(
                "bond element of kind {} in a {} configuration",
                value.kind(),
                self.kind
            )));
        }
        self.bonds[slot] = value;
        Ok(())
    }

    /// Ordered product around the plaquette, with the two return sides
    /// entering inverted: U_1 U_2 U_3^{-1} U_4^{-1}.
    pub fn plaquette_holonomy(&self, p: &Plaquette) -> UnitaryMatrix {
        let slots = self.lattice.plaquette_slots(p);
        holonomy_from_slots(&self.bonds, &slots, self.kind)
    }

    /// Sum of plaquette actions over the entire lattice.
    pub fn total_action(&self) -> f64 {
        self.lattice
            .plaquettes()
            .iter()
            .map(|p| plaquette_action(&self.plaquette_holonomy(p)))
            .sum()
    }

    /// Local gauge transformation: bond (x, nu) maps to
    /// r_x g r_{x+nu}^{-1}, with `r` indexed by site enumeration order.
    pub fn gauge_transform(&self, r: &[UnitaryMatrix]) -> Result<GaugeConfig<'a>> {
        if r.len() != self.lattice.sites().len() {
            return Err(Error::InvalidParameter(alloc::format!(
                "gauge transformation needs {} site elements, got {}",
                self.lattice.sites().len(),
                r.len()
            )));
        }
        if r.iter().any(|m| m.kind() != self.kind) {
            return Err(Error::InvalidParameter(
                "gauge transformation kind mismatch".into(),
            ));
        }
        let mut out = self.clone();
        for (slot, bond) in self.lattice.bonds().iter().enumerate() {
            let from = self.lattice.site_index(&bond.base);
            let to = self.lattice.site_index(&bond.base.step(bond.direction));
            out.bonds[slot] = r[from].mul(&self.bonds[slot]).mul(&r[to].adjoint());
        }
        Ok(out)
    }
}

fn holonomy_from_slots(
    bonds: &[UnitaryMatrix],
    slots: &[(usize, bool); 4],
    kind: GroupKind,
) -> UnitaryMatrix {
    let mut u = UnitaryMatrix::identity(kind).expect("validated kind");
    for (slot, inverted) in slots {
        let side = &bonds[*slot];
        u = if *inverted {
            u.mul(&side.adjoint())
        } else {
            u.mul(side)
        };
    }
    u
}

/// Plaquette action 2 Re Tr(1 - U_p) = ||1 - U_p||^2, in [0, 4N].
pub fn plaquette_action(u_p: &UnitaryMatrix) -> f64 {
    let n = u_p.order() as f64;
    2.0 * n - 2.0 * u_p.matrix().trace().re
}

/// Precomputed sampling context for one (lattice, group, coupling) triple.
/// Immutable and Sync: parallel drivers may call `block_sum` from many
/// threads and merge the results in block order.
pub struct PartitionSampler {
    lattice: Lattice,
    kind: GroupKind,
    c: f64,
    fix_tree: bool,
    plaquette_slots: Vec<[(usize, bool); 4]>,
}

impl PartitionSampler {
    pub fn new(params: &ActionParams, fix_tree: bool) -> Self {
        let lattice = Lattice::new(*params.spec());
        let plaquette_slots = lattice
            .plaquettes()
            .iter()
            .map(|p| lattice.plaquette_slots(p))
            .collect();
        PartitionSampler {
            lattice,
            kind: params.kind(),
            c: params.prefactor(),
            fix_tree,
            plaquette_slots,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// One Monte Carlo sample of exp(-c * total action) with freshly drawn
    /// bond variables.
    fn sample(&self, bonds: &mut [UnitaryMatrix], rng: &mut SeededRandomStream) -> Result<f64> {
        for (slot, bond) in bonds.iter_mut().enumerate() {
            if self.fix_tree && self.lattice.is_tree_slot(slot) {
                continue;
            }
            *bond = group::haar_sample(self.kind, rng)?;
        }
        let mut action = 0.0;
        for slots in &self.plaquette_slots {
            let u_p = holonomy_from_slots(bonds, slots, self.kind);
            action += plaquette_action(&u_p);
        }
        Ok(math::exp(-self.c * action))
    }

    /// Accumulates one block's samples on the block's private stream.
    pub fn block_sum(&self, seed: u64, block: u64, len: u64) -> Result<BlockSum> {
        let mut rng = SeededRandomStream::for_block(seed, block);
        let id = UnitaryMatrix::identity(self.kind)?;
        let mut bonds = alloc::vec![id; self.lattice.bonds().len()];
        let mut partial = BlockSum::default();
        for _ in 0..len {
            partial.add(self.sample(&mut bonds, &mut rng)?);
        }
        Ok(partial)
    }

    /// Serial reference estimate: all blocks in order on this thread.
    pub fn estimate(&self, n: u64, seed: u64) -> Result<McEstimate> {
        let mut total = BlockSum::default();
        for (block, len) in mc::blocks_of(n) {
            total = total.merge(self.block_sum(seed, block, len)?);
        }
        McEstimate::from_total(total, seed)
    }
}

/// Monte Carlo estimate of Z: sample mean of exp(-c * total action) over
/// i.i.d. Haar configurations on every bond.
pub fn mc_partition_estimate(params: &ActionParams, n: u64, seed: u64) -> Result<McEstimate> {
    PartitionSampler::new(params, false).estimate(n, seed)
}

/// Same estimator in the enhanced temporal gauge: tree bonds pinned to the
/// identity, only the retained bonds sampled. Z is unchanged.
pub fn gauge_fixed_mc_estimate(params: &ActionParams, n: u64, seed: u64) -> Result<McEstimate> {
    PartitionSampler::new(params, true).estimate(n, seed)
}

/// Normalization Z^n = c^{d(N) Lambda_r / 2} Z extracting the
/// ultraviolet-singular prefactor.
pub fn normalized_partition(value: f64, params: &ActionParams, retained: usize) -> Result<f64> {
    if !(value > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "partition value must be positive, got {value}"
        )));
    }
    if params.is_zero_coupling() {
        return Err(Error::InvalidParameter(
            "the zero-coupling surrogate has no normalized partition function".into(),
        ));
    }
    let exponent = params.kind().algebra_dim() as f64 * retained as f64 / 2.0;
    Ok(math::powf(params.prefactor(), exponent) * value)
}

/// Free energy per gluon degree of freedom: ln(Z^n) / (d(N) Lambda_r).
pub fn free_energy(zn: f64, retained: usize, kind: GroupKind) -> Result<f64> {
    if !(zn > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "normalized partition value must be positive, got {zn}"
        )));
    }
    if retained == 0 || kind.algebra_dim() == 0 {
        return Err(Error::InvalidParameter(
            "free energy needs at least one retained degree of freedom".into(),
        ));
    }
    Ok(math::ln(zn) / (kind.algebra_dim() as f64 * retained as f64))
}
