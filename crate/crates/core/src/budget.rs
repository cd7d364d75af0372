//! Degree windows, truncation budgets, and the colimit probe.
//!
//! For a truncated module the probe tracks the composite transition from each
//! level `b` to the current top `N`:
//!
//! * vanishes: everything at level `N-2` dies by level `N`, or everything at
//!   some level `N-s` dies by `N`,
//! * persists: some level `b <= N-3` loses no rank on its way to `N` (and has
//!   a class surviving its first step),
//! * otherwise unsettled.
//!
//! Vanishing is stable once classes are seen to die within `s` steps from two
//! consecutive base levels (`N-s -> N` and `N-s-1 -> N-1` both zero).
//! Persistence is stable when the ranks of `N-2 -> N-1`, `N-1 -> N` and
//! `N-2 -> N` agree. The top level is raised until the answer is settled and
//! stable, or `max_level` is reached.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{grade_add, render_grade, Grade, Grading};
use crate::linalg::{Matrix, SparseVec};
use crate::module::{GradedModule, Key};

/// A class counts as persistent once it survives this many transitions
/// without any loss of rank.
pub const PERSIST_SPAN: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    /// Fine grades with every exponent in `[lo, hi]`.
    Box { lo: i64, hi: i64 },
    /// Total degrees in `[lo, hi]`; extra torus weights within `span` of the
    /// center of each degree.
    Total { lo: i64, hi: i64, span: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub window: Window,
    pub min_level: u32,
    pub max_level: u32,
    /// Cap for annihilating powers and membership searches.
    pub cap: u32,
    /// Collect explicit preimages on truncated modules too (exact modules
    /// always get them).
    pub witnesses: bool,
}

impl Budget {
    pub fn fine(lo: i64, hi: i64) -> Self {
        Budget {
            window: Window::Box { lo, hi },
            min_level: 1,
            max_level: 6,
            cap: 8,
            witnesses: false,
        }
    }

    pub fn total(lo: i64, hi: i64, span: i64, max_level: u32) -> Self {
        Budget {
            window: Window::Total { lo, hi, span },
            min_level: 1,
            max_level,
            cap: 8,
            witnesses: false,
        }
    }

    pub fn describe(&self) -> String {
        let w = match &self.window {
            Window::Box { lo, hi } => format!("box [{lo},{hi}]"),
            Window::Total { lo, hi, span } => format!("degrees [{lo},{hi}] weight span {span}"),
        };
        format!("{w}, levels {}..{}, cap {}", self.min_level, self.max_level, self.cap)
    }

    /// All grades of the window, in increasing order.
    pub fn grades(&self, grading: &Grading) -> Result<Vec<Grade>> {
        let mut out = Vec::new();
        match (&self.window, grading.is_fine()) {
            (Window::Box { lo, hi }, true) => {
                let n = grading.nvars();
                let mut cur = vec![*lo; n];
                loop {
                    out.push(Grade::from_slice(&cur));
                    let mut i = n;
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        if cur[i] < *hi {
                            cur[i] += 1;
                            break;
                        }
                        cur[i] = *lo;
                    }
                }
            }
            (Window::Total { lo, hi, span }, false) => {
                let extra = grading.rank() - 1;
                for d in *lo..=*hi {
                    let center = grading.center(d);
                    let mut offs = vec![-span; extra];
                    loop {
                        let mut g = Grade::from_elem(0, extra + 1);
                        g[0] = d;
                        for (k, o) in offs.iter().enumerate() {
                            g[k + 1] = center[k + 1] + o;
                        }
                        out.push(g);
                        let mut i = extra;
                        let done = loop {
                            if i == 0 {
                                break true;
                            }
                            i -= 1;
                            if offs[i] < *span {
                                offs[i] += 1;
                                break false;
                            }
                            offs[i] = -span;
                        };
                        if done {
                            break;
                        }
                    }
                }
                Ok(out)
            }
            (w, _) => Err(Error::DegreeKey(format!(
                "window {w:?} does not fit the {} grading",
                grading.describe()
            ))),
        }
    }

    /// Grades of the window shifted by `by`.
    pub fn shifted_grades(&self, grading: &Grading, by: &Grade) -> Result<Vec<Grade>> {
        Ok(self.grades(grading)?.iter().map(|g| grade_add(g, by)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Settle<E> {
    Vanishes,
    /// A class at `level` whose image survives to the top level.
    Persists { level: u32, witness: SparseVec<E> },
    Unsettled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Exact,
    Stable,
    Unstable,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Exact => "exact",
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
        }
    }
}

/// Slice data of one grade across the probed levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe<E> {
    pub grade: Grade,
    /// `(level, dim)` for each probed level.
    pub dims: Vec<(u32, usize)>,
    /// Ranks of `N-2 -> N-1`, `N-1 -> N`, and `N-2 -> N` at the top.
    pub ranks: Option<(usize, usize, usize)>,
    /// Steps within which every class dies, seen from two consecutive base levels.
    pub death: Option<u32>,
    pub settle: Settle<E>,
    pub stability: Stability,
}

impl<E> Probe<E> {
    pub fn top_level(&self) -> u32 {
        self.dims.last().map(|d| d.0).unwrap_or(0)
    }

    pub fn vanishes(&self) -> bool {
        matches!(self.settle, Settle::Vanishes)
    }

    pub fn persists(&self) -> bool {
        matches!(self.settle, Settle::Persists { .. })
    }

    /// Colimit dimension when the data are exact or stable.
    pub fn estimate(&self) -> Option<usize> {
        match (self.stability, self.ranks) {
            (Stability::Exact, _) => self.dims.last().map(|d| d.1),
            (Stability::Stable, _) if self.vanishes() => Some(0),
            (Stability::Stable, Some((r, _, _))) => Some(r),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        let dims: Vec<String> = self.dims.iter().map(|(n, d)| format!("N{n}:{d}")).collect();
        let ranks = match self.ranks {
            Some((a, b, c)) => format!(" ranks {a},{b},{c}"),
            None => String::new(),
        };
        let death = match self.death {
            Some(s) => format!(" dies in {s}"),
            None => String::new(),
        };
        format!(
            "{} dims {}{}{} {}",
            render_grade(&self.grade),
            dims.join(" "),
            ranks,
            death,
            self.stability.as_str()
        )
    }
}

/// Decides whether the colimit slice at `grade` vanishes, escalating the top
/// level from `min_level + PERSIST_SPAN` up to `max_level` until the answer is
/// settled with stable rank data.
pub fn probe<F: Field>(m: &dyn GradedModule<F>, grade: &Grade, budget: &Budget) -> Result<Probe<F::Elem>> {
    let field = m.field();
    if m.is_exact() {
        let key = Key::new(grade.clone(), 0);
        let d = m.dim(&key)?;
        let settle = if d == 0 {
            Settle::Vanishes
        } else {
            Settle::Persists {
                level: 0,
                witness: SparseVec::unit(field, 0),
            }
        };
        return Ok(Probe {
            grade: grade.clone(),
            dims: vec![(0, d)],
            ranks: None,
            death: None,
            settle,
            stability: Stability::Exact,
        });
    }
    let lo = budget.min_level;
    if budget.max_level < lo + PERSIST_SPAN {
        return Err(Error::BudgetExhausted(format!(
            "levels {}..{} are fewer than the persistence span {}",
            lo, budget.max_level, PERSIST_SPAN
        )));
    }
    let key = |n: u32| Key::new(grade.clone(), n);
    // chains[b - lo] = composite transition from level b to the current top
    let mut chains: Vec<Matrix<F::Elem>> = Vec::new();
    let mut first_step: Vec<usize> = Vec::new();
    let mut prev_ranks: Vec<usize> = Vec::new();
    let mut dims = vec![(lo, m.dim(&key(lo))?)];
    let mut top = lo;
    loop {
        let t = m.transition(&key(top))?;
        for c in chains.iter_mut() {
            *c = t.mul(field, c);
        }
        first_step.push(t.rank(field));
        chains.push((*t).clone());
        top += 1;
        dims.push((top, m.dim(&key(top))?));
        // ranks[b - lo] = rank of the composite from b to top
        let ranks: Vec<usize> = chains.iter().map(|c| c.rank(field)).collect();
        if top < lo + PERSIST_SPAN {
            prev_ranks = ranks;
            continue;
        }
        let rank_from = |b: u32| ranks[(b - lo) as usize];
        let r1 = first_step[(top - 2 - lo) as usize];
        let r2 = first_step[(top - 1 - lo) as usize];
        let r12 = rank_from(top - 2);
        // classes die within `s` steps from two consecutive base levels
        let death = (1..top - lo).find(|&s| rank_from(top - s) == 0 && prev_ranks[(top - s - 1 - lo) as usize] == 0);
        let stability = if death.is_some() || (r1 == r2 && r2 == r12 && r12 > 0) {
            Stability::Stable
        } else {
            Stability::Unstable
        };
        let settle = if death.is_some() || r12 == 0 {
            Settle::Vanishes
        } else {
            (lo..=top - PERSIST_SPAN)
                .find(|&b| {
                    let r = first_step[(b - lo) as usize];
                    r > 0 && rank_from(b) == r
                })
                .map(|b| {
                    let c = &chains[(b - lo) as usize];
                    let j = (0..c.cols()).find(|&j| !c.column(j).is_zero()).expect("nonzero rank");
                    Settle::Persists {
                        level: b,
                        witness: SparseVec::unit(field, j),
                    }
                })
                .unwrap_or(Settle::Unsettled)
        };
        let done = !matches!(settle, Settle::Unsettled) && stability == Stability::Stable;
        if done || top >= budget.max_level {
            let n = dims.len();
            return Ok(Probe {
                grade: grade.clone(),
                dims: dims[n - 3..].to_vec(),
                ranks: Some((r1, r2, r12)),
                death,
                settle,
                stability,
            });
        }
        prev_ranks = ranks;
    }
}
