//! Step-by-step execution of the inductive argument behind the cut bound.
//!
//! Each step takes a longest chain, classifies the split it exhibits
//! (Case I: a balanced pivot separates the surplus prefix from the deficit
//! suffix; Case II: surplus meets deficit directly), removes the one or two
//! cover relations at the split, and recurses on the smaller poset. Once an
//! antichain is reached, the cut is rebuilt bottom-up, moving the affected
//! elements between sides according to the recorded subcase. Every
//! bookkeeping identity is checked as the trace runs: relation counts drop
//! by exactly 2 (Case I) or 1 (Case II), the rebuilt cut grows by exactly
//! one crossing per step, and the intermediate cuts always keep deficit
//! elements on the bottom and surplus elements on top.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::maxcut::{classify, Category, Cut};
use crate::poset::{Chain, Poset};

/// Which split a longest chain exhibits. `beta` is the 1-based chain
/// position of the split, counting from the top element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainCase {
    /// Positions above `beta` are surplus, position `beta` is balanced,
    /// positions below are deficit.
    I { beta: usize },
    /// Positions above `beta` are surplus, positions from `beta` on are
    /// deficit.
    II { beta: usize },
}

impl ChainCase {
    pub fn beta(self) -> usize {
        match self {
            ChainCase::I { beta } | ChainCase::II { beta } => beta,
        }
    }

    fn label(self) -> &'static str {
        match self {
            ChainCase::I { .. } => "I",
            ChainCase::II { .. } => "II",
        }
    }
}

/// The chain elements acting in one step, named bottom-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepActors {
    /// `below ≺ pivot ≺ above` with a balanced pivot (Case I).
    Pivot {
        below: usize,
        pivot: usize,
        above: usize,
    },
    /// `below ≺ above` at the surplus/deficit boundary (Case II).
    Boundary { below: usize, above: usize },
}

/// How the smaller poset's cut is adjusted when lifted back one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutAdjustment {
    None,
    MoveToTop(usize),
    MoveToBottom(usize),
    MoveBoth { to_bottom: usize, to_top: usize },
}

/// One inductive step: the chain used, the case split, the removed cover
/// pairs, and the adjustment applied when rebuilding the cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub case: ChainCase,
    /// 1-3 for Case I, 1-4 for Case II, keyed by how the two endpoints
    /// reclassify after the removal.
    pub subcase: u8,
    /// The longest chain used, top-down.
    pub chain: Vec<usize>,
    pub actors: StepActors,
    /// Removed cover pairs as `(lower, upper)`.
    pub removed: Vec<(usize, usize)>,
    pub m_before: usize,
    pub m_after: usize,
    pub cut_adjustment: CutAdjustment,
}

impl TraceStep {
    /// `"I1"`, `"II4"`, ...
    pub fn case_label(&self) -> String {
        format!("{}{}", self.case.label(), self.subcase)
    }
}

/// The full run: every step down to an antichain plus the cut rebuilt for
/// the original poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub steps: Vec<TraceStep>,
    /// Element count of the terminal antichain (equals the original n).
    pub base_n: usize,
    pub final_cut: Cut,
}

impl ProofTrace {
    pub fn case_i_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.case, ChainCase::I { .. }))
            .count()
    }

    pub fn case_ii_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.case, ChainCase::II { .. }))
            .count()
    }

    /// Line-oriented report: one step per line, then the final cut.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            let actors = match step.actors {
                StepActors::Pivot {
                    below,
                    pivot,
                    above,
                } => format!("({below},{pivot},{above})"),
                StepActors::Boundary { below, above } => format!("({below},{above})"),
            };
            let removed = step
                .removed
                .iter()
                .map(|(x, y)| format!("({x},{y})"))
                .collect::<Vec<_>>()
                .join(",");
            let adjust = match step.cut_adjustment {
                CutAdjustment::None => "none".to_string(),
                CutAdjustment::MoveToTop(v) => format!("top({v})"),
                CutAdjustment::MoveToBottom(v) => format!("bottom({v})"),
                CutAdjustment::MoveBoth { to_bottom, to_top } => {
                    format!("both({to_bottom},{to_top})")
                }
            };
            writeln!(
                out,
                "step {}: {} beta={} actors={} removed={} m={}->{} adjust={}",
                i + 1,
                step.case_label(),
                step.case.beta(),
                actors,
                removed,
                step.m_before,
                step.m_after,
                adjust
            )
            .expect("writing to a String cannot fail");
        }
        let m_original = self
            .steps
            .first()
            .map(|s| s.m_before)
            .unwrap_or(0);
        writeln!(
            out,
            "final cut: B={} U={} size={} m={}",
            format_set(self.final_cut.bottom()),
            format_set(self.final_cut.top()),
            self.final_cut.size(),
            m_original
        )
        .expect("writing to a String cannot fail");
        out
    }
}

fn format_set(ids: &[usize]) -> String {
    let body = ids
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("{{{body}}}")
}

/// Verifies the facts a longest chain must satisfy and returns its case.
///
/// Checks: consecutive chain elements are covers, the top is surplus, the
/// bottom is deficit, and the categories along the chain form a surplus
/// prefix followed by an optional single balanced pivot and a deficit
/// suffix. Any failure is an implementation bug and is surfaced loudly.
pub fn chain_profile(p: &Poset, chain: &Chain) -> Result<ChainCase> {
    let t = chain.len();
    if t < 2 {
        return Err(Error::ChainTooShort { t });
    }
    let elements = chain.elements();
    for j in 0..t - 1 {
        if !p.is_cover(elements[j + 1], elements[j]) {
            return Err(Error::ProfileViolation {
                detail: format!(
                    "consecutive chain elements {} and {} are not a cover pair",
                    elements[j + 1],
                    elements[j]
                ),
            });
        }
    }

    let cls = classify(p);
    let cats: Vec<Category> = elements.iter().map(|&v| cls.category(v)).collect();
    if cats[0] != Category::Surplus {
        return Err(Error::ProfileViolation {
            detail: format!("chain top {} is not surplus", elements[0]),
        });
    }
    if cats[t - 1] != Category::Deficit {
        return Err(Error::ProfileViolation {
            detail: format!("chain bottom {} is not deficit", elements[t - 1]),
        });
    }

    let split = cats
        .iter()
        .position(|&c| c != Category::Surplus)
        .expect("the bottom element is not surplus");
    let suffix_start = match cats[split] {
        Category::Balanced => split + 1,
        Category::Deficit => split,
        Category::Surplus => unreachable!("split position is not surplus"),
    };
    for (offset, &cat) in cats[suffix_start..].iter().enumerate() {
        if cat != Category::Deficit {
            return Err(Error::ProfileViolation {
                detail: format!(
                    "chain position {} ({}) should be deficit but is {}",
                    suffix_start + offset + 1,
                    elements[suffix_start + offset],
                    cat.as_str()
                ),
            });
        }
    }

    let beta = split + 1;
    Ok(match cats[split] {
        Category::Balanced => ChainCase::I { beta },
        _ => ChainCase::II { beta },
    })
}

/// Performs one induction step: removes the split's cover relations and
/// records how the endpoints reclassify in the smaller poset.
pub fn inductive_step(p: &Poset) -> Result<(Poset, TraceStep)> {
    if p.relation_count() == 0 {
        return Err(Error::AlreadyAntichain);
    }
    let chain = p.longest_chain()?;
    let case = chain_profile(p, &chain)?;
    let elements = chain.elements();
    let m_before = p.relation_count();

    let (q, actors, removed) = match case {
        ChainCase::I { beta } => {
            let above = elements[beta - 2];
            let pivot = elements[beta - 1];
            let below = elements[beta];
            let q = p
                .remove_relation(below, pivot)?
                .remove_relation(pivot, above)?;
            let actors = StepActors::Pivot {
                below,
                pivot,
                above,
            };
            (q, actors, vec![(below, pivot), (pivot, above)])
        }
        ChainCase::II { beta } => {
            let above = elements[beta - 2];
            let below = elements[beta - 1];
            let q = p.remove_relation(below, above)?;
            let actors = StepActors::Boundary { below, above };
            (q, actors, vec![(below, above)])
        }
    };

    let cls_q = classify(&q);
    let (below, above) = match actors {
        StepActors::Pivot { below, above, pivot } => {
            if cls_q.category(pivot) != Category::Balanced {
                return Err(Error::ProfileViolation {
                    detail: format!("pivot {pivot} is not balanced after the removal"),
                });
            }
            (below, above)
        }
        StepActors::Boundary { below, above } => (below, above),
    };

    let below_cat = cls_q.category(below);
    let above_cat = cls_q.category(above);
    let (subcase, cut_adjustment) = match (case, below_cat, above_cat) {
        (_, Category::Deficit, Category::Surplus) => (1, CutAdjustment::None),
        (_, Category::Deficit, Category::Balanced) => (2, CutAdjustment::MoveToTop(above)),
        (_, Category::Balanced, Category::Surplus) => (3, CutAdjustment::MoveToBottom(below)),
        (ChainCase::II { .. }, Category::Balanced, Category::Balanced) => (
            4,
            CutAdjustment::MoveBoth {
                to_bottom: below,
                to_top: above,
            },
        ),
        _ => {
            return Err(Error::ProfileViolation {
                detail: format!(
                    "split endpoints {below} ({}) and {above} ({}) reclassified impossibly",
                    below_cat.as_str(),
                    above_cat.as_str()
                ),
            });
        }
    };

    let m_after = q.relation_count();
    debug_assert_eq!(m_before - m_after, removed.len());

    let step = TraceStep {
        case,
        subcase,
        chain: elements.to_vec(),
        actors,
        removed,
        m_before,
        m_after,
        cut_adjustment,
    };
    Ok((q, step))
}

/// Runs the induction to an antichain and rebuilds the cut, verifying at
/// every lift that the size grows by exactly one crossing and that deficit
/// and surplus elements stay on their required sides.
pub fn run_induction(p: &Poset) -> Result<ProofTrace> {
    let mut current = p.clone();
    let mut steps = Vec::new();
    while current.relation_count() > 0 {
        let (q, step) = inductive_step(&current)?;
        steps.push(step);
        current = q;
    }
    let base_n = current.n();

    // Rebuild bottom-up. On the terminal antichain every element is
    // balanced; they start on the bottom side, matching the direct rule.
    let n = p.n();
    let mut bottom = FixedBitSet::with_capacity(n);
    bottom.insert_range(..);
    let mut top = FixedBitSet::with_capacity(n);
    let mut size = 0usize;

    for (idx, step) in steps.iter().enumerate().rev() {
        for &(x, y) in &step.removed {
            current.insert_relation_unchecked(x, y);
        }
        match step.cut_adjustment {
            CutAdjustment::None => {}
            CutAdjustment::MoveToTop(v) => {
                bottom.remove(v);
                top.insert(v);
            }
            CutAdjustment::MoveToBottom(v) => {
                top.remove(v);
                bottom.insert(v);
            }
            CutAdjustment::MoveBoth { to_bottom, to_top } => {
                top.remove(to_bottom);
                bottom.insert(to_bottom);
                bottom.remove(to_top);
                top.insert(to_top);
            }
        }
        let step_no = idx + 1;
        let lifted = current.e_count_bits(&bottom, &top);
        if lifted != size + 1 {
            return Err(Error::TraceInvariant {
                step: step_no,
                detail: format!("lift changed the cut size from {size} to {lifted}, expected +1"),
            });
        }
        size = lifted;

        let cls = classify(&current);
        if let Some(&v) = cls.deficit().iter().find(|&&v| !bottom.contains(v)) {
            return Err(Error::TraceInvariant {
                step: step_no,
                detail: format!("deficit element {v} is not on the bottom side"),
            });
        }
        if let Some(&v) = cls.surplus().iter().find(|&&v| !top.contains(v)) {
            return Err(Error::TraceInvariant {
                step: step_no,
                detail: format!("surplus element {v} is not on the top side"),
            });
        }
    }
    debug_assert_eq!(&current, p, "replay must rebuild the original relation");

    let case_i = steps
        .iter()
        .filter(|s| matches!(s.case, ChainCase::I { .. }))
        .count();
    let case_ii = steps.len() - case_i;
    if p.relation_count() != 2 * case_i + case_ii {
        return Err(Error::TraceInvariant {
            step: steps.len(),
            detail: format!(
                "relation count {} does not match 2*{case_i} + {case_ii}",
                p.relation_count()
            ),
        });
    }
    if size != case_i + case_ii {
        return Err(Error::TraceInvariant {
            step: steps.len(),
            detail: format!("final size {size} does not match the step count"),
        });
    }
    if 2 * size < p.relation_count() {
        return Err(Error::TraceInvariant {
            step: steps.len(),
            detail: format!(
                "final cut size {size} misses the half bound for m = {}",
                p.relation_count()
            ),
        });
    }

    let final_cut = Cut::new(p, bottom.ones().collect(), top.ones().collect())
        .expect("lifting moves elements between sides of a partition");
    debug_assert_eq!(final_cut.size(), size);

    Ok(ProofTrace {
        steps,
        base_n,
        final_cut,
    })
}
