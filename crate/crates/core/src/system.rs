//! Direct systems of nest algebras, their colimit invariants, and a
//! bounded intertwining search between finite presentations.
//!
//! Colimit-level questions (element equality, subscale membership) are
//! answered three-valued with an explicit stage horizon: the presentation
//! is finite, so pushing to the last stage decides them, and "unknown" is
//! returned only when the horizon cuts the scan short.

use std::collections::BTreeMap;

use crate::algebra::NestAlgebra;
use crate::embedding::{Embedding, GHom, OrderFlags, SummandMap};
use crate::error::{Error, Result};
use crate::pisom::GElement;

/// A finite presentation of a direct system: stage algebras chained by
/// embeddings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectSystem {
    stages: Vec<NestAlgebra>,
    maps: Vec<Embedding>,
}

/// Order flags of every composite map of a presentation, and the induced
/// system-family memberships.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemReport {
    /// Flags of the composite from stage k to stage l, for every k < l.
    pub composite_flags: BTreeMap<(usize, usize), OrderFlags>,
    pub sys_floc: bool,
    pub sys_foc: bool,
    pub sys_flop: bool,
    pub sys_fop: bool,
}

/// An element of the colimit group, presented at a stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitElement {
    pub stage: usize,
    pub value: GElement,
}

/// Three-valued answer for horizon-bounded colimit questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Which scale predicate to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleKind {
    /// Realizable rank distributions: nonnegative, margins within ranks.
    Sigma,
    /// Projection classes: diagonal support within atom ranks.
    Sigma0,
    /// Order conserving subscale: staircase at every later stage.
    SigmaOc,
    /// Order preserving subscale: strictly monotone at every later stage.
    SigmaOp,
}

impl DirectSystem {
    pub fn new(stages: Vec<NestAlgebra>, maps: Vec<Embedding>) -> Result<Self> {
        if stages.is_empty() || maps.len() + 1 != stages.len() {
            return Err(Error::ChainMismatch(
                "need one more stage than maps".into(),
            ));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.domain() != &stages[k] || m.codomain() != &stages[k + 1] {
                return Err(Error::ChainMismatch(format!(
                    "map {k} does not join stages {k} and {}",
                    k + 1
                )));
            }
        }
        Ok(DirectSystem { stages, maps })
    }

    /// Builds the system from the maps alone, reading the stages off their
    /// endpoints.
    pub fn from_maps(maps: Vec<Embedding>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::ChainMismatch("need at least one map".into()));
        }
        let mut stages = vec![maps[0].domain().clone()];
        for m in &maps {
            stages.push(m.codomain().clone());
        }
        DirectSystem::new(stages, maps)
    }

    pub fn stages(&self) -> &[NestAlgebra] {
        &self.stages
    }

    pub fn maps(&self) -> &[Embedding] {
        &self.maps
    }

    pub fn num_stages(&self) -> usize {
        self.stages.len()
    }

    pub fn last_stage(&self) -> usize {
        self.stages.len() - 1
    }

    /// The composite embedding from stage k to stage l (identity at k = l).
    pub fn composite(&self, k: usize, l: usize) -> Result<Embedding> {
        if k > l || l >= self.stages.len() {
            return Err(Error::StageOutOfRange {
                index: l,
                stages: self.stages.len(),
            });
        }
        let mut acc = Embedding::identity(self.stages[k].clone());
        for m in &self.maps[k..l] {
            acc = m.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Flags of all composites and the system-family classification.
    pub fn report(&self) -> SystemReport {
        let mut composite_flags = BTreeMap::new();
        for k in 0..self.stages.len() {
            for l in (k + 1)..self.stages.len() {
                let flags = self
                    .composite(k, l)
                    .expect("chain validated")
                    .classify_order_properties();
                composite_flags.insert((k, l), flags);
            }
        }
        let all = |f: fn(&OrderFlags) -> bool| composite_flags.values().all(f);
        SystemReport {
            sys_floc: all(|f| f.loc),
            sys_foc: all(|f| f.oc),
            sys_flop: all(|f| f.lop),
            sys_fop: all(|f| f.op),
            composite_flags,
        }
    }

    /// Pushes a limit element forward to a later stage through the
    /// transition homomorphisms.
    pub fn push(&self, e: &LimitElement, to_stage: usize) -> Result<LimitElement> {
        if e.stage > to_stage || to_stage >= self.stages.len() {
            return Err(Error::StageOutOfRange {
                index: to_stage,
                stages: self.stages.len(),
            });
        }
        if e.value.ambient() != &self.stages[e.stage] {
            return Err(Error::DomainMismatch);
        }
        let mut value = e.value.clone();
        for m in &self.maps[e.stage..to_stage] {
            value = m.g_map().apply(&value)?;
        }
        Ok(LimitElement {
            stage: to_stage,
            value,
        })
    }

    /// Equality in the colimit, decided by pushing to common stages.
    /// Equality propagates forward, so the furthest reachable stage
    /// decides; "unknown" only when the horizon stops before the last
    /// stage.
    pub fn limit_equal(
        &self,
        e: &LimitElement,
        f: &LimitElement,
        horizon: usize,
    ) -> Result<Verdict> {
        let start = e.stage.max(f.stage);
        let target = self.last_stage().min(start + horizon);
        let ep = self.push(e, target)?;
        let fp = self.push(f, target)?;
        if ep.value == fp.value {
            Ok(Verdict::Yes)
        } else if target == self.last_stage() {
            Ok(Verdict::No)
        } else {
            Ok(Verdict::Unknown)
        }
    }

    /// Horizon-bounded scale membership at the element's stage and beyond.
    pub fn scale_membership(
        &self,
        e: &LimitElement,
        which: ScaleKind,
        horizon: usize,
    ) -> Result<Verdict> {
        if e.stage >= self.stages.len() {
            return Err(Error::StageOutOfRange {
                index: e.stage,
                stages: self.stages.len(),
            });
        }
        if e.value.ambient() != &self.stages[e.stage] {
            return Err(Error::DomainMismatch);
        }
        match which {
            ScaleKind::Sigma => Ok(if e.value.in_scale() {
                Verdict::Yes
            } else {
                Verdict::No
            }),
            ScaleKind::Sigma0 => {
                let ok = e.value.is_diagonal() && e.value.in_scale();
                Ok(if ok { Verdict::Yes } else { Verdict::No })
            }
            ScaleKind::SigmaOc | ScaleKind::SigmaOp => {
                if !e.value.in_scale() {
                    return Ok(Verdict::No);
                }
                let target = self.last_stage().min(e.stage + horizon);
                for stage in e.stage..=target {
                    let pushed = self.push(e, stage)?;
                    let support = pushed.value.support();
                    let ok = match which {
                        ScaleKind::SigmaOc => support.is_staircase(),
                        _ => support.is_strictly_monotone(),
                    };
                    if !ok {
                        return Ok(Verdict::No);
                    }
                }
                if target == self.last_stage() {
                    Ok(Verdict::Yes)
                } else {
                    Ok(Verdict::Unknown)
                }
            }
        }
    }

    /// The cell-level transition homomorphism from stage k to stage l.
    pub fn transition(&self, k: usize, l: usize) -> Result<GHom> {
        Ok(self.composite(k, l)?.g_map())
    }
}

/// An alternating chain of crossover embeddings realizing a commuting
/// intertwining of two presentations up to the searched depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intertwining {
    /// c_1: A_0 -> B_0, c_2: B_0 -> A_1, c_3: A_1 -> B_1, ... with each
    /// consecutive composite equal to the corresponding system composite.
    pub crossovers: Vec<Embedding>,
}

/// All locally order conserving embeddings X -> Y whose K0 entries are at
/// most `entry_bound`, in deterministic order.
fn candidate_embeddings(
    domain: &NestAlgebra,
    codomain: &NestAlgebra,
    entry_bound: usize,
) -> Vec<Embedding> {
    // enumerate summand multisets over the monotone maps, capacity-pruned
    fn monotone_maps(domain: &NestAlgebra, codomain: &NestAlgebra) -> Vec<Vec<usize>> {
        fn rec(
            n: usize,
            m: usize,
            lo: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for a in lo..=m {
                cur.push(a);
                rec(n, m, a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(
            domain.num_atoms(),
            codomain.num_atoms(),
            1,
            &mut Vec::new(),
            &mut out,
        );
        out
    }
    let maps = monotone_maps(domain, codomain);
    let mut out = Vec::new();
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    fn rec(
        idx: usize,
        maps: &[Vec<usize>],
        domain: &NestAlgebra,
        codomain: &NestAlgebra,
        entry_bound: usize,
        used: &mut [u32],
        chosen: &mut Vec<Vec<usize>>,
        out: &mut Vec<Embedding>,
    ) {
        if !chosen.is_empty() {
            let lists: Vec<&[usize]> = chosen.iter().map(Vec::as_slice).collect();
            if let Ok(phi) =
                Embedding::from_atom_lists(domain.clone(), codomain.clone(), &lists)
            {
                if phi.classify_order_properties().loc
                    && phi
                        .k0_matrix()
                        .entries()
                        .iter()
                        .flatten()
                        .all(|&v| v <= entry_bound as i64)
                {
                    out.push(phi);
                }
            }
        }
        for (i, f) in maps.iter().enumerate().skip(idx) {
            // capacity pruning
            let fits = (1..=domain.num_atoms()).all(|a| {
                used[f[a - 1] - 1] + domain.rank_of_atom(a)
                    <= codomain.rank_of_atom(f[a - 1])
            });
            if !fits {
                continue;
            }
            for a in 1..=domain.num_atoms() {
                used[f[a - 1] - 1] += domain.rank_of_atom(a);
            }
            chosen.push(f.clone());
            rec(i, maps, domain, codomain, entry_bound, used, chosen, out);
            chosen.pop();
            for a in 1..=domain.num_atoms() {
                used[f[a - 1] - 1] -= domain.rank_of_atom(a);
            }
        }
    }
    let mut used = vec![0u32; codomain.num_atoms()];
    rec(
        0,
        &maps,
        domain,
        codomain,
        entry_bound,
        &mut used,
        &mut chosen,
        &mut out,
    );
    out
}

/// Bounded search for a commuting intertwining between two presentations:
/// `depth` commuting triangles over crossovers with K0 entries at most
/// `entry_bound`.  `None` means the bounded search exhausted, not that no
/// intertwining exists.
pub fn inv_compare(
    sys_a: &DirectSystem,
    sys_b: &DirectSystem,
    depth: usize,
    entry_bound: usize,
) -> Result<Option<Intertwining>> {
    if depth == 0 {
        return Ok(None);
    }
    // stages needed: A_0..A_ceil(depth/2), B_0..B_floor(depth/2) roughly;
    // bail out if the presentations are too short
    let a_needed = depth / 2 + 1;
    let b_needed = depth.div_ceil(2);
    if sys_a.num_stages() < a_needed.max(1) || sys_b.num_stages() < b_needed.max(1) {
        return Err(Error::StageOutOfRange {
            index: a_needed.max(b_needed),
            stages: sys_a.num_stages().min(sys_b.num_stages()),
        });
    }

    // triangle t (0-based) constrains crossovers c_t and c_{t+1}:
    // even t: c_{t+1} ∘ c_t = A-composite (t/2 -> t/2+1)
    // odd  t: c_{t+1} ∘ c_t = B-composite ((t-1)/2 -> (t+1)/2)
    fn endpoint(
        sys_a: &DirectSystem,
        sys_b: &DirectSystem,
        k: usize,
    ) -> (NestAlgebra, bool) {
        // domain of crossover c_k (0-based): alternates A_0, B_0, A_1, B_1...
        if k % 2 == 0 {
            (sys_a.stages()[k / 2].clone(), true)
        } else {
            (sys_b.stages()[k / 2].clone(), false)
        }
    }

    fn search(
        sys_a: &DirectSystem,
        sys_b: &DirectSystem,
        depth: usize,
        entry_bound: usize,
        chain: &mut Vec<Embedding>,
    ) -> Result<Option<Vec<Embedding>>> {
        let k = chain.len();
        if k == depth + 1 {
            return Ok(Some(chain.clone()));
        }
        let (dom, _) = endpoint(sys_a, sys_b, k);
        let (cod, _) = endpoint(sys_a, sys_b, k + 1);
        for cand in candidate_embeddings(&dom, &cod, entry_bound) {
            if k > 0 {
                let t = k - 1;
                let required = if t % 2 == 0 {
                    sys_a.composite(t / 2, t / 2 + 1)?
                } else {
                    sys_b.composite(t / 2, t / 2 + 1)?
                };
                let composed = cand.compose(&chain[k - 1])?;
                if composed.summands() != required.summands() {
                    continue;
                }
            }
            chain.push(cand);
            if let Some(found) = search(sys_a, sys_b, depth, entry_bound, chain)? {
                return Ok(Some(found));
            }
            chain.pop();
        }
        Ok(None)
    }

    let mut chain = Vec::new();
    Ok(search(sys_a, sys_b, depth, entry_bound, &mut chain)?
        .map(|crossovers| Intertwining { crossovers }))
}

/// Outcome of the triple-composition stability check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleOutcome {
    /// The two inner composites carry the flag (the hypothesis).
    pub hypothesis_met: bool,
    /// The full triple composite carries the flag; vacuously true when the
    /// hypothesis fails.
    pub holds: bool,
}

/// Checks that order conservation (or preservation) of the two overlapping
/// composites forces it for the triple composite.
pub fn check_autooc(
    phi: &Embedding,
    psi: &Embedding,
    eta: &Embedding,
    op_mode: bool,
) -> Result<TripleOutcome> {
    if psi.domain() != phi.codomain() || eta.domain() != psi.codomain() {
        return Err(Error::ChainMismatch("triple does not compose".into()));
    }
    let flag = |e: &Embedding| {
        let f = e.classify_order_properties();
        if op_mode {
            f.op
        } else {
            f.oc
        }
    };
    let inner1 = psi.compose(phi)?;
    let inner2 = eta.compose(psi)?;
    let hypothesis_met = flag(&inner1) && flag(&inner2);
    let holds = if hypothesis_met {
        flag(&eta.compose(&inner1)?)
    } else {
        true
    };
    Ok(TripleOutcome {
        hypothesis_met,
        holds,
    })
}

/// Convenience: builds an embedding's summand lists, used by callers that
/// report intertwining chains.
pub fn summand_lists(phi: &Embedding) -> Vec<Vec<usize>> {
    phi.summands().iter().map(SummandMap::atoms).map(<[usize]>::to_vec).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Cell;
    use crate::corpus;

    fn standard_system(stages: usize) -> DirectSystem {
        DirectSystem::from_maps(corpus::standard_chain(stages)).unwrap()
    }

    fn refinement_system(stages: usize) -> DirectSystem {
        DirectSystem::from_maps(corpus::refinement_chain(stages)).unwrap()
    }

    #[test]
    fn make_system_examples() {
        let sys = standard_system(4);
        assert_eq!(sys.num_stages(), 4);
        let report = sys.report();
        assert!(report.sys_foc && report.sys_floc);

        let refi = refinement_system(4);
        let report = refi.report();
        assert!(report.sys_foc && report.sys_fop);

        // Φ6a then Φ6b: the composite is LOC although Φ6b alone is not
        let sys = DirectSystem::from_maps(vec![corpus::phi6a(), corpus::phi6b()]).unwrap();
        let report = sys.report();
        assert!(report.composite_flags[&(0, 2)].loc);
        assert!(!report.composite_flags[&(1, 2)].loc);
    }

    #[test]
    fn make_system_errors() {
        let bad = DirectSystem::from_maps(vec![corpus::phi6b(), corpus::phi6a()]);
        assert!(matches!(bad, Err(Error::ChainMismatch(_))));
        assert!(matches!(
            DirectSystem::new(vec![], vec![]),
            Err(Error::ChainMismatch(_))
        ));
    }

    #[test]
    fn push_and_equality() {
        let sys = DirectSystem::from_maps(vec![corpus::phi1()]).unwrap();
        let e = LimitElement {
            stage: 0,
            value: GElement::new(
                sys.stages()[0].clone(),
                [(Cell::new(1, 3), 1)],
            )
            .unwrap(),
        };
        let pushed = sys.push(&e, 1).unwrap();
        assert_eq!(pushed.value.get(&Cell::new(1, 2)), 2);
        assert_eq!(pushed.value.get(&Cell::new(2, 3)), 1);
        assert_eq!(pushed.value.get(&Cell::new(3, 3)), 1);

        assert_eq!(sys.limit_equal(&e, &e, 8).unwrap(), Verdict::Yes);
        let f = LimitElement {
            stage: 1,
            value: pushed.value.clone(),
        };
        assert_eq!(sys.limit_equal(&e, &f, 8).unwrap(), Verdict::Yes);
    }

    #[test]
    fn noninjective_transition_identifies_elements() {
        // a map with two summands hitting the same codomain cells makes
        // distinct stage-0 elements agree downstream
        let t11 = NestAlgebra::new(&[1, 1]).unwrap();
        let cod = NestAlgebra::new(&[2, 2]).unwrap();
        let m = Embedding::from_atom_lists(t11.clone(), cod, &[&[1, 2], &[1, 2]]).unwrap();
        let sys = DirectSystem::from_maps(vec![m]).unwrap();
        let e = LimitElement {
            stage: 0,
            value: GElement::new(
                t11.clone(),
                [(Cell::new(1, 1), 1), (Cell::new(2, 2), -1)],
            )
            .unwrap(),
        };
        let zero = LimitElement {
            stage: 0,
            value: GElement::zero(t11),
        };
        // not equal at stage 0 but both push to... (still distinct here);
        // the decisive check is at the last stage
        let v = sys.limit_equal(&e, &zero, 8).unwrap();
        // columns of this g-map are linearly independent, so distinct
        assert_eq!(v, Verdict::No);
    }

    #[test]
    fn horizon_gives_unknown() {
        let sys = standard_system(4);
        let t2 = sys.stages()[0].clone();
        let e = LimitElement {
            stage: 0,
            value: GElement::new(t2.clone(), [(Cell::new(1, 1), 1)]).unwrap(),
        };
        let f = LimitElement {
            stage: 0,
            value: GElement::new(t2, [(Cell::new(2, 2), 1)]).unwrap(),
        };
        assert_eq!(sys.limit_equal(&e, &f, 0).unwrap(), Verdict::Unknown);
        assert_eq!(sys.limit_equal(&e, &f, 10).unwrap(), Verdict::No);
    }

    #[test]
    fn scale_membership_examples() {
        let sys = standard_system(4);
        let t2 = sys.stages()[0].clone();
        let id_class = LimitElement {
            stage: 0,
            value: GElement::new(
                t2.clone(),
                [(Cell::new(1, 1), 1), (Cell::new(2, 2), 1)],
            )
            .unwrap(),
        };
        assert_eq!(
            sys.scale_membership(&id_class, ScaleKind::Sigma, 8).unwrap(),
            Verdict::Yes
        );
        assert_eq!(
            sys.scale_membership(&id_class, ScaleKind::Sigma0, 8).unwrap(),
            Verdict::Yes
        );
        assert_eq!(
            sys.scale_membership(&id_class, ScaleKind::SigmaOc, 8).unwrap(),
            Verdict::Yes
        );

        // refinement system: generators stay strictly monotone forever
        let refi = refinement_system(4);
        let gen = LimitElement {
            stage: 0,
            value: GElement::new(
                refi.stages()[0].clone(),
                [(Cell::new(1, 2), 1)],
            )
            .unwrap(),
        };
        assert_eq!(
            refi.scale_membership(&gen, ScaleKind::SigmaOp, 8).unwrap(),
            Verdict::Yes
        );

        // a non-LOC map sends the cell (1,3) generator to a non-staircase
        // element one stage later
        let non_loc = DirectSystem::from_maps(vec![corpus::phi6b()]).unwrap();
        let gen13 = LimitElement {
            stage: 0,
            value: GElement::new(
                non_loc.stages()[0].clone(),
                [(Cell::new(1, 3), 1)],
            )
            .unwrap(),
        };
        assert_eq!(
            non_loc
                .scale_membership(&gen13, ScaleKind::SigmaOc, 1)
                .unwrap(),
            Verdict::No
        );

        // horizon too small: inconclusive
        assert_eq!(
            refi.scale_membership(&gen, ScaleKind::SigmaOp, 1).unwrap(),
            Verdict::Unknown
        );
    }

    #[test]
    fn pi_commutes_with_transitions() {
        for sys in [standard_system(3), refinement_system(3)] {
            for k in 0..sys.last_stage() {
                let gamma = sys.transition(k, k + 1).unwrap();
                let k0 = sys.composite(k, k + 1).unwrap().k0_matrix();
                for cell in sys.stages()[k].cells() {
                    let g = GElement::new(
                        sys.stages()[k].clone(),
                        [(cell, 1)],
                    )
                    .unwrap();
                    let image = gamma.apply(&g).unwrap();
                    // π_f(γ(g)) = K0 · π_f(g) and likewise for π_i
                    let pf = image.pi_f();
                    let pi = image.pi_i();
                    let mut exp_f = vec![0i64; sys.stages()[k + 1].num_atoms()];
                    let mut exp_i = exp_f.clone();
                    for (aa, row) in k0.entries().iter().enumerate() {
                        exp_f[aa] += row[cell.row - 1];
                        exp_i[aa] += row[cell.col - 1];
                    }
                    assert_eq!(pf, exp_f);
                    assert_eq!(pi, exp_i);
                }
            }
        }
    }

    #[test]
    fn self_intertwining_found() {
        let sys = standard_system(3);
        let tw = inv_compare(&sys, &sys, 2, 2).unwrap().unwrap();
        assert_eq!(tw.crossovers.len(), 3);
        // triangles commute by construction; spot-check the first
        let c2c1 = tw.crossovers[1].compose(&tw.crossovers[0]).unwrap();
        assert_eq!(c2c1.summands(), sys.composite(0, 1).unwrap().summands());

        let refi = refinement_system(3);
        assert!(inv_compare(&refi, &refi, 2, 2).unwrap().is_some());
    }

    #[test]
    fn standard_vs_refinement_exhausts() {
        let std_sys = standard_system(3);
        let refi = refinement_system(3);
        assert!(inv_compare(&std_sys, &refi, 2, 2).unwrap().is_none());
    }

    #[test]
    fn telescope_intertwining() {
        // a system vs. its own telescope (composite of two steps)
        let sys = standard_system(3);
        let telescope = DirectSystem::from_maps(vec![sys.composite(0, 2).unwrap()]).unwrap();
        let tw = inv_compare(&sys, &telescope, 1, 2).unwrap();
        assert!(tw.is_some());
    }

    #[test]
    fn autooc_harness() {
        let r2 = corpus::refinement_embedding(2);
        let r4 = corpus::refinement_embedding(4);
        let r8 = corpus::refinement_embedding(8);
        let out = check_autooc(&r2, &r4, &r8, false).unwrap();
        assert!(out.hypothesis_met && out.holds);
        let out = check_autooc(&r2, &r4, &r8, true).unwrap();
        assert!(out.hypothesis_met && out.holds);

        // hypothesis unmet: vacuous true
        let phi6a = corpus::phi6a();
        let phi6b = corpus::phi6b();
        let t5 = phi6b.codomain().clone();
        let id = Embedding::identity(t5);
        let out = check_autooc(&phi6a, &phi6b, &id, false).unwrap();
        assert!(out.holds);

        assert!(matches!(
            check_autooc(&phi6a, &phi6a, &phi6a, false),
            Err(Error::ChainMismatch(_))
        ));
    }
}
