//! Bras, kets and the category of causal cobordisms.
//!
//! A bra `⟨J, M, L|` stands for a slice sequence `J ≺⊣ M ⊢≻ L`, a ket
//! `|M, L, M'⟩` for a connecting sequence `M ⊢≻ L ≺⊣ M'`. Sequences of
//! states alternate bras and kets, adjacent states sharing one pinned
//! semi-sequence. Three endofunctors act on sequences: reversal `T`,
//! label-wise dualization `P`, and the duality `C = P ∘ T`; all three
//! square to the identity.

use std::collections::BTreeMap;

use crate::causal::{
    check_collapse, check_orthogonal, check_reduction, check_reflective, CausalError, CcMap,
    Collapse, Reduction, Slice,
};
use crate::cell::{Cell, VertexId};
use crate::complex::CellComplex;
use crate::duality::dual_closed;

/// A semi-sequence `M ⊢_π T ≻_ρ B`: a collapse and a reduction into one
/// transition, with `ρ ⋋ π`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiSequence {
    pub m: CellComplex,
    pub transition: CellComplex,
    pub base: CellComplex,
    pub pi: Collapse,
    pub rho: Reduction,
}

impl SemiSequence {
    pub fn validate(pi: Collapse, rho: Reduction) -> Result<SemiSequence, CausalError> {
        if pi.target() != rho.target() {
            return Err(CausalError::StatesMismatch(
                "semi-sequence maps must share the transition".into(),
            ));
        }
        for (name, c) in [
            ("M", pi.source()),
            ("transition", pi.target()),
            ("label", rho.source()),
        ] {
            let rep = crate::classify::classify(c);
            if !(rep.closed.holds && rep.non_pinching.holds && rep.cell_connected.holds) {
                return Err(CausalError::NotInB(format!("{name} is not in B")));
            }
        }
        crate::causal::check_compatible(rho.map(), pi.map())?;
        Ok(SemiSequence {
            m: pi.source().clone(),
            transition: pi.target().clone(),
            base: rho.source().clone(),
            pi,
            rho,
        })
    }

    fn rank(&self) -> Option<usize> {
        self.base.rank()
    }
}

/// An outgoing state `⟨J, M, L|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bra {
    /// `M ⊢≻ J`.
    pub left: SemiSequence,
    /// `M ⊢≻ L`.
    pub right: SemiSequence,
}

/// An ingoing state `|M, L, M'⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    /// `M ⊢≻ L`.
    pub left: SemiSequence,
    /// `M' ⊢≻ L`.
    pub right: SemiSequence,
}

impl Bra {
    pub fn validate(left: SemiSequence, right: SemiSequence) -> Result<Bra, CausalError> {
        if left.m != right.m {
            return Err(CausalError::StatesMismatch("bra semis must share M".into()));
        }
        check_orthogonal(left.pi.map(), right.pi.map())?;
        Ok(Bra { left, right })
    }

    pub fn labels(&self) -> (&CellComplex, &CellComplex, &CellComplex) {
        (&self.left.base, &self.left.m, &self.right.base)
    }
}

impl Ket {
    pub fn validate(left: SemiSequence, right: SemiSequence) -> Result<Ket, CausalError> {
        if left.base != right.base {
            return Err(CausalError::StatesMismatch(
                "ket semis must share the label".into(),
            ));
        }
        check_reflective(left.rho.map(), right.rho.map())?;
        Ok(Ket { left, right })
    }

    pub fn labels(&self) -> (&CellComplex, &CellComplex, &CellComplex) {
        (&self.left.m, &self.left.base, &self.right.m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Bra(Bra),
    Ket(Ket),
}

impl State {
    fn left_semi(&self) -> &SemiSequence {
        match self {
            State::Bra(b) => &b.left,
            State::Ket(k) => &k.left,
        }
    }
    fn right_semi(&self) -> &SemiSequence {
        match self {
            State::Bra(b) => &b.right,
            State::Ket(k) => &k.right,
        }
    }
    pub fn is_bra(&self) -> bool {
        matches!(self, State::Bra(_))
    }

    /// Swap the two semis (label reversal).
    fn reversed(&self) -> State {
        match self {
            State::Bra(b) => State::Bra(Bra {
                left: b.right.clone(),
                right: b.left.clone(),
            }),
            State::Ket(k) => State::Ket(Ket {
                left: k.right.clone(),
                right: k.left.clone(),
            }),
        }
    }
}

/// An alternating sequence of states with pinned junction semi-sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSequence {
    pub states: Vec<State>,
}

impl StateSequence {
    pub fn validate(states: Vec<State>) -> Result<StateSequence, CausalError> {
        if states.is_empty() {
            return Err(CausalError::StatesMismatch("empty sequence".into()));
        }
        for w in states.windows(2) {
            if w[0].is_bra() == w[1].is_bra() {
                return Err(CausalError::StatesMismatch(
                    "states must alternate bra/ket".into(),
                ));
            }
            if w[0].right_semi() != w[1].left_semi() {
                return Err(CausalError::StatesMismatch(
                    "adjacent states must share their junction semi-sequence".into(),
                ));
            }
        }
        // All labels of the whole sequence share one rank.
        let ranks: std::collections::BTreeSet<Option<usize>> = states
            .iter()
            .flat_map(|s| [s.left_semi().rank(), s.right_semi().rank()])
            .collect();
        if ranks.len() > 1 {
            return Err(CausalError::StatesMismatch(format!(
                "labels of mixed ranks {ranks:?}"
            )));
        }
        Ok(StateSequence { states })
    }

    /// The identity sequence on one state.
    pub fn identity(s: State) -> StateSequence {
        StateSequence { states: vec![s] }
    }

    /// The image `ℑ(σ)` (first state).
    pub fn image(&self) -> &State {
        self.states.first().expect("nonempty")
    }

    /// The domain `𝔇(σ)` (last state).
    pub fn domain(&self) -> &State {
        self.states.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Composition `σ ∘ γ`: the domain of `σ` must be the image of `γ`.
pub fn compose_sequences(
    sigma: &StateSequence,
    gamma: &StateSequence,
) -> Result<StateSequence, CausalError> {
    if sigma.domain() != gamma.image() {
        return Err(CausalError::StatesMismatch(
            "domain of the first differs from the image of the second".into(),
        ));
    }
    let mut states = sigma.states.clone();
    states.extend(gamma.states.iter().skip(1).cloned());
    StateSequence::validate(states)
}

/// Time reversal `T`: reverse the order of states and of each state's
/// labels. Contravariant, `T² = id` on the nose.
pub fn functor_t(sigma: &StateSequence) -> StateSequence {
    StateSequence {
        states: sigma.states.iter().rev().map(|s| s.reversed()).collect(),
    }
}

/// Registry of dualized complexes keeping junction labels pinned: every
/// distinct complex in the sequence is dualized and relabeled exactly once.
type DualEntry = (CellComplex, BTreeMap<Cell, Cell>);

struct DualRegistry {
    seen: BTreeMap<Vec<(Cell, usize)>, DualEntry>,
    next: VertexId,
}

impl DualRegistry {
    fn new() -> Self {
        DualRegistry {
            seen: BTreeMap::new(),
            next: 0,
        }
    }

    /// Dual of `k`, relabeled into a fresh vertex range; returns the
    /// complex and the primal-cell → dual-cell map.
    fn dual(&mut self, k: &CellComplex) -> Result<DualEntry, CausalError> {
        let key = k.ranked_cells();
        if let Some(hit) = self.seen.get(&key) {
            return Ok(hit.clone());
        }
        let d = dual_closed(k).map_err(|e| CausalError::NotInB(e.to_string()))?;
        let (relabeled, vmap) = d.complex.relabel_from(self.next);
        self.next += d.complex.vertex_set().len() as VertexId;
        let to_dual: BTreeMap<Cell, Cell> = d
            .to_dual
            .iter()
            .map(|(c, dc)| (c.clone(), Cell::new(dc.iter().map(|v| vmap[&v]))))
            .collect();
        self.seen.insert(key, (relabeled.clone(), to_dual.clone()));
        Ok((relabeled, to_dual))
    }

    /// Dual of a map: a verified map between the relabeled duals, with
    /// source and target swapped roles left to the caller.
    fn dual_map(&mut self, m: &CcMap) -> Result<CcMap, CausalError> {
        let (ds, smap) = self.dual(&m.source)?;
        let (dt, tmap) = self.dual(&m.target)?;
        let mut map = vec![0usize; ds.len()];
        for i in 0..m.source.len() {
            let sd = &smap[m.source.cell(i)];
            let td = &tmap[m.target.cell(m.map[i])];
            map[ds.index_of(sd).expect("dual cell")] = dt.index_of(td).expect("dual cell");
        }
        Ok(CcMap::new(ds, dt, map))
    }

    /// Dual of a semi-sequence: `M ⊢π T ≻ρ B` becomes `B̄ ⊢ρ̄ T̄ ≻π̄ M̄`.
    fn dual_semi(&mut self, s: &SemiSequence) -> Result<SemiSequence, CausalError> {
        let new_pi = check_collapse(&self.dual_map(s.rho.map())?)
            .map_err(|v| CausalError::NotInB(format!("dual reduction not a collapse: {v:?}")))?;
        let new_rho = check_reduction(&self.dual_map(s.pi.map())?)
            .map_err(|v| CausalError::NotInB(format!("dual collapse not a reduction: {v:?}")))?;
        SemiSequence::validate(new_pi, new_rho)
    }

    fn dual_state(&mut self, s: &State) -> Result<State, CausalError> {
        match s {
            State::Bra(b) => {
                let left = self.dual_semi(&b.left)?;
                let right = self.dual_semi(&b.right)?;
                Ok(State::Ket(Ket::validate(left, right)?))
            }
            State::Ket(k) => {
                let left = self.dual_semi(&k.left)?;
                let right = self.dual_semi(&k.right)?;
                Ok(State::Bra(Bra::validate(left, right)?))
            }
        }
    }
}

/// Parity `P`: dualize every state in place (bras become kets and back),
/// keeping the order. Covariant, `P² ≅ id`.
pub fn functor_p(sigma: &StateSequence) -> Result<StateSequence, CausalError> {
    let mut reg = DualRegistry::new();
    let states = sigma
        .states
        .iter()
        .map(|s| reg.dual_state(s))
        .collect::<Result<Vec<_>, _>>()?;
    StateSequence::validate(states)
}

/// Charge conjugation `C = P ∘ T`: dualize and reverse. Contravariant,
/// `C² ≅ id`.
pub fn functor_c(sigma: &StateSequence) -> Result<StateSequence, CausalError> {
    functor_p(&functor_t(sigma))
}

/// Interpolates two slices sharing a boundary component (with identical
/// vertex ids) into the alternating sequence `⟨J₀,M₀,L| |M₀,L,M₁⟩ ⟨L,M₁,L₁|`,
/// relabeling every label into disjoint ranges with pinned junctions.
pub fn sequence_from_slice_chain(slices: &[Slice]) -> Result<StateSequence, CausalError> {
    if slices.is_empty() {
        return Err(CausalError::StatesMismatch("no slices".into()));
    }
    for w in slices.windows(2) {
        if w[0].l != w[1].j {
            return Err(CausalError::StatesMismatch(
                "consecutive slices must share their boundary label".into(),
            ));
        }
    }

    // Canonical maps per slice and side.
    struct Raw {
        rho_j: Reduction,
        pi_j: Collapse,
        rho_l: Reduction,
        pi_l: Collapse,
    }
    let mut raws = Vec::new();
    for s in slices {
        let cj = crate::causal::canonical_maps(&s.complex, &s.j)?;
        let cl = crate::causal::canonical_maps(&s.complex, &s.l)?;
        if cj.midsection.complex != cl.midsection.complex {
            return Err(CausalError::NotASlice("midsections differ".into()));
        }
        raws.push(Raw {
            rho_j: cj.rho,
            pi_j: cj.pi,
            rho_l: cl.rho,
            pi_l: cl.pi,
        });
    }

    // Globally relabel every distinct label complex once.
    let mut next: VertexId = 0;
    let mut table: BTreeMap<Vec<(Cell, usize)>, BTreeMap<VertexId, VertexId>> = BTreeMap::new();
    let mut relabeled: BTreeMap<Vec<(Cell, usize)>, CellComplex> = BTreeMap::new();
    let mut intern = |c: &CellComplex| -> (CellComplex, BTreeMap<VertexId, VertexId>) {
        let key = c.ranked_cells();
        if let Some(map) = table.get(&key) {
            return (relabeled[&key].clone(), map.clone());
        }
        let (out, map) = c.relabel_from(next);
        next += c.vertex_set().len() as VertexId;
        table.insert(key.clone(), map.clone());
        relabeled.insert(key, out.clone());
        (out, map)
    };

    let remap = |m: &CcMap,
                 s: &(CellComplex, BTreeMap<VertexId, VertexId>),
                 t: &(CellComplex, BTreeMap<VertexId, VertexId>)|
     -> CcMap {
        let mut map = vec![0usize; s.0.len()];
        for i in 0..m.source.len() {
            let sc = Cell::new(m.source.cell(i).iter().map(|v| s.1[&v]));
            let tc = Cell::new(m.target.cell(m.map[i]).iter().map(|v| t.1[&v]));
            map[s.0.index_of(&sc).expect("relabeled")] = t.0.index_of(&tc).expect("relabeled");
        }
        CcMap::new(s.0.clone(), t.0.clone(), map)
    };

    let mut states: Vec<State> = Vec::new();
    let mut prev_right: Option<SemiSequence> = None;
    for (i, raw) in raws.iter().enumerate() {
        let j = intern(&slices[i].j);
        let jt = intern(raw.rho_j.target());
        let m = intern(raw.pi_j.source());
        let lt = intern(raw.rho_l.target());
        let l = intern(&slices[i].l);

        let rho_j = check_reduction(&remap(raw.rho_j.map(), &j, &jt))
            .map_err(|v| CausalError::NotASlice(format!("ρ_J: {v:?}")))?;
        let pi_j = check_collapse(&remap(raw.pi_j.map(), &m, &jt))
            .map_err(|v| CausalError::NotASlice(format!("π_J: {v:?}")))?;
        let rho_l = check_reduction(&remap(raw.rho_l.map(), &l, &lt))
            .map_err(|v| CausalError::NotASlice(format!("ρ_L: {v:?}")))?;
        let pi_l = check_collapse(&remap(raw.pi_l.map(), &m, &lt))
            .map_err(|v| CausalError::NotASlice(format!("π_L: {v:?}")))?;

        let left = SemiSequence::validate(pi_j, rho_j)?;
        let right = SemiSequence::validate(pi_l, rho_l)?;

        if let Some(junction) = prev_right.take() {
            // The interpolating ket shares the previous right semi and this
            // bra's left semi over the same label.
            let ket = Ket::validate(junction, left.clone())?;
            states.push(State::Ket(ket));
        }
        prev_right = Some(right.clone());
        states.push(State::Bra(Bra::validate(left, right)?));
    }
    StateSequence::validate(states)
}

/// Structural equivalence up to cc-isomorphism of every label, used for
/// the functor laws (the complexes are relabeled by dualization).
pub fn sequences_equivalent(a: &StateSequence, b: &StateSequence) -> bool {
    if a.states.len() != b.states.len() {
        return false;
    }
    for (x, y) in a.states.iter().zip(&b.states) {
        if x.is_bra() != y.is_bra() {
            return false;
        }
        let xs = [x.left_semi(), x.right_semi()];
        let ys = [y.left_semi(), y.right_semi()];
        for (s, t) in xs.iter().zip(&ys) {
            for (c, d) in [
                (&s.m, &t.m),
                (&s.transition, &t.transition),
                (&s.base, &t.base),
            ] {
                if crate::iso::is_isomorphic(c, d).is_none() {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::validate_slice;
    use crate::toolkit::generate::cylinder;

    fn cylinder_slice() -> Slice {
        let k = cylinder(4, 1);
        let end: Vec<VertexId> = (0..4).collect();
        let j = k.restriction(&end).unwrap();
        validate_slice(&k, &j).unwrap()
    }

    #[test]
    fn single_bra_sequence() {
        let seq = sequence_from_slice_chain(&[cylinder_slice()]).unwrap();
        assert_eq!(seq.len(), 1);
        assert!(seq.image().is_bra());
    }

    #[test]
    fn identity_law() {
        let seq = sequence_from_slice_chain(&[cylinder_slice()]).unwrap();
        let id = StateSequence::identity(seq.domain().clone());
        let composed = compose_sequences(&seq, &id).unwrap();
        assert_eq!(composed, seq);
        let id2 = StateSequence::identity(seq.image().clone());
        assert_eq!(compose_sequences(&id2, &seq).unwrap(), seq);
    }

    #[test]
    fn t_is_an_involution() {
        let seq = sequence_from_slice_chain(&[cylinder_slice()]).unwrap();
        assert_eq!(functor_t(&functor_t(&seq)), seq);
    }

    #[test]
    fn c_equals_p_after_t() {
        let seq = sequence_from_slice_chain(&[cylinder_slice()]).unwrap();
        let c = functor_c(&seq).unwrap();
        let pt = functor_p(&functor_t(&seq)).unwrap();
        assert_eq!(c, pt);
        assert!(!c.image().is_bra());
    }
}
