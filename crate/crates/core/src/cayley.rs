//! Paley-type Cayley graphs and Cayley sum graphs over `F_q`.

use serde::Serialize;

use crate::clique::{self, BitGraph, CliqueReport, SearchOpts};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldCtx};
use crate::subgroup::{compute_subgroup, SubgroupSd};
use crate::sumsets::dilate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GraphKind {
    /// `x ~ y` iff `x - y` lies in the connection set.
    Cayley,
    /// `x ~ y` iff `x != y` and `x + y` lies in the connection set.
    CayleySum,
}

/// Which Paley-type graph to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaleyVariant {
    /// `GP(q, d)`: difference graph on `S_d`.
    Gp,
    /// `GPS(q, d)`: sum graph on `S_d ∪ {0}`.
    Gps,
    /// Sum graph on `S_d` alone; its cliques are the sets with `A +^ A ⊆ S_d`.
    GpsNoZero,
}

#[derive(Clone, Debug)]
pub struct CayleyGraph {
    pub ctx: FieldCtx,
    pub d: u64,
    pub connection: ElemSet,
    pub kind: GraphKind,
    graph: BitGraph,
}

impl CayleyGraph {
    /// Builds a Cayley or Cayley sum graph for an arbitrary connection set.
    pub fn new(ctx: &FieldCtx, d: u64, connection: ElemSet, kind: GraphKind) -> Result<Self> {
        let q = ctx.q() as usize;
        if kind == GraphKind::Cayley {
            let neg = crate::sumsets::negate(ctx, &connection);
            if connection.contains(0) || neg != connection {
                return Err(Error::PreconditionViolated(
                    "a Cayley graph needs a symmetric connection set without 0".into(),
                ));
            }
        }
        let conn: Vec<Elem> = connection.iter().map(Elem).collect();
        let rows = ctx
            .elements()
            .map(|x| {
                let mut row = ElemSet::empty(q);
                for &s in &conn {
                    let y = match kind {
                        GraphKind::CayleySum => ctx.sub(s, x),
                        GraphKind::Cayley => ctx.add(x, s),
                    };
                    if y != x {
                        row.insert(y.idx());
                    }
                }
                row
            })
            .collect();
        Ok(CayleyGraph {
            ctx: ctx.clone(),
            d,
            connection,
            kind,
            graph: BitGraph::from_rows(rows),
        })
    }

    pub fn graph(&self) -> &BitGraph {
        &self.graph
    }

    pub fn row(&self, x: Elem) -> &ElemSet {
        self.graph.row(x.idx() as usize)
    }

    pub fn degree(&self, x: Elem) -> usize {
        self.row(x).len()
    }
}

/// `GPS(q, d) = CayS(F_q, S_d ∪ {0})`, or `CayS(F_q, S_d)` when `no_zero`.
pub fn build_gps(ctx: &FieldCtx, d: u64, no_zero: bool) -> Result<CayleyGraph> {
    let sd = compute_subgroup(ctx, d)?;
    let conn = if no_zero { sd.members.clone() } else { sd.with_zero() };
    CayleyGraph::new(ctx, d, conn, GraphKind::CayleySum)
}

/// The `d`-Paley graph `GP(q, d)`; requires `q ≡ 1 (mod 2d)`.
pub fn build_gp(ctx: &FieldCtx, d: u64) -> Result<CayleyGraph> {
    let sd = compute_subgroup(ctx, d)?;
    if (ctx.q() - 1) % (2 * d) != 0 {
        return Err(Error::ParityViolation {
            q: ctx.q(),
            two_d: 2 * d,
        });
    }
    CayleyGraph::new(ctx, d, sd.members, GraphKind::Cayley)
}

pub fn build_variant(ctx: &FieldCtx, d: u64, variant: PaleyVariant) -> Result<CayleyGraph> {
    match variant {
        PaleyVariant::Gp => build_gp(ctx, d),
        PaleyVariant::Gps => build_gps(ctx, d, false),
        PaleyVariant::GpsNoZero => build_gps(ctx, d, true),
    }
}

pub fn max_clique(g: &CayleyGraph, opts: &SearchOpts) -> Result<CliqueReport> {
    clique::max_clique(g.graph(), opts)
}

pub fn enumerate_max_cliques(g: &CayleyGraph, opts: &SearchOpts) -> Result<CliqueReport> {
    clique::enumerate_max_cliques(g.graph(), opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum EkrClass {
    /// The clique equals `alpha · F_sqrt(q)` with `alpha ∈ S_d`.
    Canonical { alpha: u64 },
    NonCanonical,
}

/// Tests each witness for the form `α·F_sqrt(q)` with `α ∈ S_d`, where the
/// subfield is computed as the fixed set of `x -> x^sqrt(q)`.
pub fn classify_ekr(ctx: &FieldCtx, d: u64, report: &CliqueReport) -> Result<Vec<EkrClass>> {
    let sd = compute_subgroup(ctx, d)?;
    let q = ctx.q() as usize;
    let sub = ElemSet::from_indices(q, ctx.half_subfield()?.into_iter().map(Elem::idx));
    Ok(report
        .witnesses
        .iter()
        .map(|w| classify_one(ctx, &sd, &sub, &ElemSet::from_indices(q, w.iter().copied())))
        .collect())
}

fn classify_one(ctx: &FieldCtx, sd: &SubgroupSd, sub: &ElemSet, w: &ElemSet) -> EkrClass {
    if w.len() != sub.len() || !w.contains(0) {
        return EkrClass::NonCanonical;
    }
    // If w = α·F then every nonzero element of w is a valid α up to F^*.
    for alpha in w.iter().filter(|&x| x != 0) {
        if dilate(ctx, sub, Elem(alpha)) != *w {
            return EkrClass::NonCanonical;
        }
        if sd.contains(Elem(alpha)) {
            return EkrClass::Canonical { alpha };
        }
    }
    EkrClass::NonCanonical
}
