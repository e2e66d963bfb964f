//! The contraction step: resolve the edge to the deeper of its two homes,
//! merge there, repeat the merge in every descendant unit representing both
//! classes, push expelled edges upward until they settle, and fold every
//! observed parallelism into the record forest.

use std::collections::VecDeque;

use graph_core::{EdgeId, VertexId};

use crate::book::EdgeState;
use crate::structure::{ContractionStructure, Home, StepReport};
use crate::ContractError;

/// One parallelism noticed anywhere during a step, normalized to edge ids
/// plus the labels that direct the record.
struct Record {
    absorbed: EdgeId,
    incumbent: EdgeId,
    /// label of the common neighbor, fixed at detection time
    neighbor: VertexId,
    /// label of the merge side the absorbed edge hung off
    absorbed_side: VertexId,
}

struct Expel {
    edge: EdgeId,
    from: usize,
    /// carried unchanged through re-expulsions
    side: VertexId,
}

#[derive(Default)]
struct Events {
    records: Vec<Record>,
    expels: VecDeque<Expel>,
}

impl ContractionStructure {
    /// Contracts the parallel class `e` belongs to, fusing its two classes.
    pub fn contract(&mut self, e: EdgeId) -> Result<StepReport, ContractError> {
        self.resolve_live_edge(e)?;
        Ok(self.contract_resolved(e))
    }

    /// The step past validation. Construction also drives this to collapse
    /// the expansion cycles; those steps touch internal edges only and
    /// produce empty reports.
    pub(crate) fn contract_resolved(&mut self, e: EdgeId) -> StepReport {
        let r = self.book.root_of(e);
        let (ga, gb) = self.book.ends(r).expect("live edge is placed");
        let pu = self.climb_reduced(ga);
        let pv = self.climb_reduced(gb);
        debug_assert_ne!(pu, pv, "live edges never join a class to itself");

        let Home::Unit { unit: du, rep: ru } = self.home[&pu] else {
            unreachable!("a class with an edge is unit-seated")
        };
        let Home::Unit { unit: dv, rep: rv } = self.home[&pv] else {
            unreachable!("a class with an edge is unit-seated")
        };
        // Work in the deeper of the two homes; the shallower class reaches
        // it through the child dictionaries.
        let (deep, a, a_label, b_label) = if self.units[du].level >= self.units[dv].level {
            (du, ru, pu, pv)
        } else {
            (dv, rv, pv, pu)
        };
        let b = self
            .rep_at(deep, b_label)
            .expect("adjacent classes meet in the deeper home");
        debug_assert_eq!(
            self.units[deep].unit.alpha(a, b).map(|h| self.book.root_of(h)),
            Some(r),
            "the contracted class is held where the merge happens"
        );

        let mut ev = Events::default();
        let kept = self.cascade_merge(deep, a, a_label, b, b_label, &mut ev);
        self.settle_expels(pu, pv, &mut ev);

        // Survivor: larger class, ties to the larger label.
        let (s_label, _) =
            if (self.live[&pu], pu) >= (self.live[&pv], pv) { (pu, pv) } else { (pv, pu) };

        // Direct and apply the records, ordered by the common neighbor.
        ev.records.sort_by_key(|rec| rec.neighbor);
        debug_assert!(
            ev.records.windows(2).all(|w| w[0].neighbor < w[1].neighbor),
            "one record per common neighbor"
        );
        let mut parallelisms = Vec::new();
        for rec in &ev.records {
            let ra = self.book.root_of(rec.absorbed);
            let ri = self.book.root_of(rec.incumbent);
            // Weighted runs hand the target slot to the (weight, id) minimum;
            // otherwise the survivor-side root keeps it. Internal records
            // during construction have no weights and take the second rule.
            let weighted_here = self.weighted && self.book.weight(ra).is_some();
            debug_assert_eq!(
                weighted_here,
                self.weighted && self.book.weight(ri).is_some(),
                "records never mix weighted and internal edges"
            );
            let (loser, winner) = if weighted_here {
                if self.book.weight_key(ra) < self.book.weight_key(ri) {
                    (ri, ra)
                } else {
                    (ra, ri)
                }
            } else if rec.absorbed_side == s_label {
                (ri, ra)
            } else {
                (ra, ri)
            };
            self.book.adopt(loser, winner);
            self.book.ring_remove(loser);
            if self.book.is_public(loser) {
                parallelisms.push((loser, winner));
            } else {
                debug_assert!(!self.book.is_public(winner));
            }
            *self.deg.get_mut(&rec.neighbor).expect("live neighbor") -= 1;
        }

        // The contracted class dies: the root counts as contracted, the rest
        // surfaces as self-loops in preorder.
        let mut loops = Vec::new();
        for t in self.book.preorder(r) {
            if t == r {
                self.book.set_state(t, EdgeState::Contracted);
            } else {
                self.book.set_state(t, EdgeState::Looped);
                if self.book.is_public(t) {
                    loops.push(t);
                }
            }
        }
        self.book.ring_remove(r);

        // Fused class bookkeeping. The home is the shallower of the two old
        // homes; when both lived in the merge unit it is the kept vertex.
        let (mh_unit, mh_rep) = if du == dv {
            (deep, kept)
        } else if deep == du {
            (dv, rv)
        } else {
            (du, ru)
        };
        let lu = self.live[&pu];
        let lv = self.live[&pv];
        let deg_u = self.deg[&pu];
        let deg_v = self.deg[&pv];
        self.label.remove(&(du, ru));
        self.label.remove(&(dv, rv));
        self.home.remove(&pu);
        self.home.remove(&pv);
        self.live.remove(&pu);
        self.live.remove(&pv);
        self.deg.remove(&pu);
        self.deg.remove(&pv);
        self.label.insert((mh_unit, mh_rep), s_label);
        self.home.insert(s_label, Home::Unit { unit: mh_unit, rep: mh_rep });
        self.live.insert(s_label, lu + lv);
        self.deg.insert(s_label, deg_u + deg_v - 2 - ev.records.len());
        self.book.ring_concat(pu, pv, s_label);

        StepReport { survivor: s_label, parallelisms, loops }
    }

    /// Merges the representatives of two classes inside `d` and repeats the
    /// merge in every descendant unit representing both sides. Returns the
    /// surviving representative in `d`.
    fn cascade_merge(
        &mut self,
        d: usize,
        a: VertexId,
        a_label: VertexId,
        b: VertexId,
        b_label: VertexId,
        ev: &mut Events,
    ) -> VertexId {
        let rep = self.units[d]
            .unit
            .merge(a, b)
            .expect("merge of represented classes");
        let kept = rep.kept.expect("merges name their survivor");
        debug_assert!(kept == a || kept == b);
        let (moved, moved_label, kept_label) = if kept == a {
            (b, b_label, a_label)
        } else {
            (a, a_label, b_label)
        };

        for pl in &rep.parallelisms {
            debug_assert!(
                pl.ends.0 == kept || pl.ends.1 == kept,
                "collapsed pair touches the kept vertex"
            );
            let nb_local = if pl.ends.0 == kept { pl.ends.1 } else { pl.ends.0 };
            let neighbor = self.climb_local(d, nb_local);
            ev.records.push(Record {
                absorbed: pl.absorbed,
                incumbent: pl.incumbent,
                neighbor,
                absorbed_side: moved_label,
            });
        }
        for &be in &rep.border_edges {
            ev.expels.push_back(Expel { edge: be, from: d, side: moved_label });
        }

        let kids = self.units[d].children.clone();
        for c in kids {
            let Some(x) = self.units[d].gamma.remove(&(c, moved)) else {
                continue;
            };
            match self.units[d].gamma.get(&(c, kept)) {
                None => {
                    // Only the moved side reaches down into this child; its
                    // copy now answers for the kept vertex.
                    self.units[d].gamma.insert((c, kept), x);
                    self.units[c].beta.insert(x, kept);
                }
                Some(y) => {
                    let child_kept = self.cascade_merge(c, x, moved_label, y, kept_label, ev);
                    self.units[d].gamma.insert((c, kept), child_kept);
                    let cb = &mut self.units[c].beta;
                    cb.remove(&x);
                    cb.remove(&y);
                    cb.insert(child_kept, kept);
                }
            }
        }
        kept
    }

    /// Reinserts expelled edges one level up until each lands in a unit
    /// where its endpoints are not both on the border. The root unit has no
    /// border, so every edge settles.
    fn settle_expels(&mut self, pu: VertexId, pv: VertexId, ev: &mut Events) {
        while let Some(x) = ev.expels.pop_front() {
            let p = self.units[x.from].parent.expect("the root unit never expels");
            let (ga, gb) = self.book.ends(x.edge).expect("expelled edge is placed");
            let la = self.climb_reduced(ga);
            let lb = self.climb_reduced(gb);
            // One side is the merging pair, the other the far class.
            let a_merged = la == pu || la == pv;
            debug_assert_ne!(
                a_merged,
                lb == pu || lb == pv,
                "expelled edge joins the merged class to another"
            );
            let far = if a_merged { lb } else { la };
            let ra = self.rep_at(p, la).expect("expelled endpoint is represented above");
            let rb = self.rep_at(p, lb).expect("expelled endpoint is represented above");
            let rep = self.units[p]
                .unit
                .insert_edge(x.edge, ra, rb)
                .expect("expelled edges arrive loop-free under fresh ids");
            if !rep.border_edges.is_empty() {
                debug_assert_eq!(rep.border_edges, vec![x.edge]);
                ev.expels.push_back(Expel { edge: x.edge, from: p, side: x.side });
            } else if let Some(pl) = rep.parallelisms.first() {
                debug_assert_eq!(rep.parallelisms.len(), 1);
                debug_assert_eq!(pl.absorbed, x.edge);
                ev.records.push(Record {
                    absorbed: pl.absorbed,
                    incumbent: pl.incumbent,
                    neighbor: far,
                    absorbed_side: x.side,
                });
            }
        }
    }
}
