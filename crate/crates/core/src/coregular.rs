//! Coregular sequences: the definition, Koszul vanishing, codepth search,
//! the radical criterion for local cohomology, and the three-surface checks.
//!
//! Verdict policy under a truncation budget:
//!
//! * `Holds` needs every tested slice to vanish with exact or stable data.
//! * `Fails` needs a class that persists with exact or stable data; it is
//!   reported with the grade, level and class so it can be re-checked.
//! * Anything else is `Inconclusive`, as is a module that vanishes on the
//!   whole window.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::budget::{probe, Budget, Probe, Settle, Stability};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{grade_add, grade_sub, render_grade, Grade};
use crate::koszul::koszul_module;
use crate::linalg::{Matrix, SparseVec};
use crate::localcoh::local_cohomology_module;
use crate::module::{
    push_to_level, render_combination, require_in_ambient, solve_mult, ElementHandle, FreeModule,
    GradedModule, KernelModule, Key, ModuleRef, QuotientModule,
};
use crate::poly::{ideal_membership_bounded, monomials_of_degree, radical_exponent, Polynomial};
use crate::ring::RingRef;

/// Explicit preimages kept per verdict; the total is still counted.
pub const WITNESS_LIMIT: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "Holds",
            Status::Fails => "Fails",
            Status::Inconclusive => "Inconclusive",
        }
    }

    pub fn is_conclusive(&self) -> bool {
        *self != Status::Inconclusive
    }

    /// Both parts must hold; a definite failure of either part wins.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fails, _) | (_, Status::Fails) => Status::Fails,
            (Status::Holds, Status::Holds) => Status::Holds,
            _ => Status::Inconclusive,
        }
    }
}

/// Outcome of one probed slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCheck {
    /// Step of the sequence (definition) or cohomological index (Koszul).
    pub step: usize,
    pub grade: Grade,
    pub outcome: Status,
    pub stability: Stability,
    pub detail: String,
}

/// A class that no budgeted level covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample<E> {
    pub step: usize,
    /// Descriptor of the module holding the class.
    pub module: String,
    pub grade: Grade,
    pub level: u32,
    /// Highest level the class was pushed to.
    pub top: u32,
    pub class: String,
    /// Coordinates over the module's basis at `(grade, level)`.
    pub coords: SparseVec<E>,
    pub stable: bool,
}

#[derive(Clone, Debug)]
pub struct Verdict<E> {
    pub status: Status,
    pub criterion: String,
    pub seq: Vec<String>,
    pub module: String,
    pub budget: Budget,
    pub slices: Vec<SliceCheck>,
    pub witnesses: Vec<String>,
    pub witness_total: usize,
    pub counterexample: Option<Counterexample<E>>,
    pub reason: String,
}

impl<E> Verdict<E> {
    fn new<F: Field<Elem = E>>(criterion: &str, seq: &[Polynomial<F>], m: &dyn GradedModule<F>, budget: &Budget) -> Self {
        Verdict {
            status: Status::Inconclusive,
            criterion: criterion.to_string(),
            seq: seq.iter().map(|x| m.ring().render(x)).collect(),
            module: m.descriptor(),
            budget: budget.clone(),
            slices: Vec::new(),
            witnesses: Vec::new(),
            witness_total: 0,
            counterexample: None,
            reason: String::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn unstable_slices(&self) -> usize {
        self.slices.iter().filter(|s| s.outcome == Status::Inconclusive).count()
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} ({}) on {}: {}", self.criterion, self.seq.join(", "), self.module, self.status.as_str());
        let _ = writeln!(s, "  budget: {}", self.budget.describe());
        let _ = writeln!(s, "  slices: {} tested, {} unsettled", self.slices.len(), self.unstable_slices());
        if !self.reason.is_empty() {
            let _ = writeln!(s, "  reason: {}", self.reason);
        }
        if let Some(c) = &self.counterexample {
            let _ = writeln!(
                s,
                "  counterexample: step {} grade {} class {} at level {} (uncovered through level {}, {})",
                c.step + 1,
                render_grade(&c.grade),
                c.class,
                c.level,
                c.top,
                if c.stable { "stable" } else { "unstable" }
            );
        }
        s
    }
}

fn conclusive(p: &Probe<impl Clone>) -> bool {
    p.stability != Stability::Unstable
}

fn outcome<E: Clone>(p: &Probe<E>) -> Status {
    match (&p.settle, conclusive(p)) {
        (Settle::Vanishes, true) => Status::Holds,
        (Settle::Persists { .. }, true) => Status::Fails,
        _ => Status::Inconclusive,
    }
}

fn check_sequence<F: Field>(seq: &[Polynomial<F>], m: &dyn GradedModule<F>) -> Result<()> {
    if seq.is_empty() {
        return Err(Error::Precondition("empty sequence".into()));
    }
    for x in seq {
        require_in_ambient(m, x)?;
    }
    Ok(())
}

/// First grade of the window where `m` does not vanish, if any.
pub fn nonvanishing_grade<F: Field>(m: &dyn GradedModule<F>, budget: &Budget) -> Result<Option<Grade>> {
    for g in budget.grades(m.ring().grading())? {
        if m.is_exact() {
            if m.dim(&Key::new(g.clone(), 0))? > 0 {
                return Ok(Some(g));
            }
            continue;
        }
        if !probe(m, &g, budget)?.vanishes() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Some `v` with `x * v = target` in `m`, trying the target's level and then
/// higher ones up to `max_level`. Returns `(level, v)`.
pub fn preimage<F: Field>(
    m: &dyn GradedModule<F>,
    x: &Polynomial<F>,
    target: &ElementHandle<F::Elem>,
    max_level: u32,
) -> Result<Option<(u32, SparseVec<F::Elem>)>> {
    let deg = m.ring().degree_of(x)?;
    let src = grade_sub(&target.key.grade, &deg);
    let top = if m.is_exact() { target.key.level } else { max_level.max(target.key.level) };
    for level in target.key.level..=top {
        let t = push_to_level(m, target, level)?;
        if let Some(v) = solve_mult(m, x, &Key::new(src.clone(), level), &t.coeffs)? {
            return Ok(Some((level, v)));
        }
    }
    Ok(None)
}

fn module_vanishes<E>(v: &mut Verdict<E>) {
    v.status = Status::Inconclusive;
    v.reason = "module vanishes in window".into();
}

fn definition_steps<F: Field>(
    seq: &[Polynomial<F>],
    m: &ModuleRef<F>,
    budget: &Budget,
    first_step: usize,
    verdict: &mut Verdict<F::Elem>,
) -> Result<()> {
    let ring = m.ring();
    let field = m.field();
    let grades = budget.grades(ring.grading())?;
    let mut unsettled = 0;
    for (i, x) in seq.iter().enumerate().skip(first_step) {
        let n: ModuleRef<F> = if i == 0 {
            m.clone()
        } else {
            Arc::new(KernelModule::new(m.clone(), &seq[..i])?)
        };
        let c = QuotientModule::new(n.clone(), x)?;
        for g in &grades {
            let p = probe(&c, g, budget)?;
            let out = outcome(&p);
            verdict.slices.push(SliceCheck {
                step: i,
                grade: g.clone(),
                outcome: out,
                stability: p.stability,
                detail: p.describe(),
            });
            match (out, &p.settle) {
                (Status::Fails, Settle::Persists { level, witness }) => {
                    let key = Key::new(g.clone(), *level);
                    let lifted = c.slice(&key)?.lift(field, witness);
                    let class = render_combination(field, &n.labels(&key)?, &lifted);
                    verdict.counterexample = Some(Counterexample {
                        step: i,
                        module: n.descriptor(),
                        grade: g.clone(),
                        level: *level,
                        top: p.top_level(),
                        class: class.clone(),
                        coords: lifted,
                        stable: true,
                    });
                    verdict.status = Status::Fails;
                    verdict.reason = format!(
                        "multiplication by {} misses {} at {}",
                        ring.render(x),
                        class,
                        render_grade(g)
                    );
                    return Ok(());
                }
                (Status::Holds, _) => {
                    if m.is_exact() || budget.witnesses {
                        let level = if n.is_exact() { 0 } else { p.top_level() - p.death.unwrap_or(2) };
                        collect_preimages(n.as_ref(), x, g, level, budget, verdict)?;
                    }
                }
                _ => unsettled += 1,
            }
        }
    }
    if unsettled > 0 {
        verdict.status = Status::Inconclusive;
        verdict.reason = format!("{unsettled} slices unsettled or unstable under the budget");
    } else {
        verdict.status = Status::Holds;
    }
    Ok(())
}

fn collect_preimages<F: Field>(
    n: &dyn GradedModule<F>,
    x: &Polynomial<F>,
    g: &Grade,
    level: u32,
    budget: &Budget,
    verdict: &mut Verdict<F::Elem>,
) -> Result<()> {
    let key = Key::new(g.clone(), level);
    let dim = n.dim(&key)?;
    let field = n.field();
    let labels = n.labels(&key)?;
    let deg = n.ring().degree_of(x)?;
    for j in 0..dim {
        verdict.witness_total += 1;
        if verdict.witnesses.len() >= WITNESS_LIMIT {
            continue;
        }
        let e = ElementHandle {
            key: key.clone(),
            coeffs: SparseVec::unit(field, j),
        };
        let Some((at, v)) = preimage(n, x, &e, budget.max_level)? else {
            verdict.witnesses.push(format!("{} has no preimage through level {}", labels[j], budget.max_level));
            continue;
        };
        let src_labels = n.labels(&Key::new(grade_sub(g, &deg), at))?;
        verdict.witnesses.push(format!(
            "{} * ({}) = {} at {} level {}",
            n.ring().render(x),
            render_combination(field, &src_labels, &v),
            labels[j],
            render_grade(g),
            at
        ));
    }
    Ok(())
}

/// Checks surjectivity of `x_1` on `M`, then of `x_{i+1}` on `0 :_M (x_1..x_i)`,
/// on every grade of the window.
pub fn is_coregular_definition<F: Field>(
    seq: &[Polynomial<F>],
    m: &ModuleRef<F>,
    budget: &Budget,
) -> Result<Verdict<F::Elem>> {
    check_sequence(seq, m.as_ref())?;
    let mut v = Verdict::new("coregular by definition", seq, m.as_ref(), budget);
    if nonvanishing_grade(m.as_ref(), budget)?.is_none() {
        module_vanishes(&mut v);
        return Ok(v);
    }
    definition_steps(seq, m, budget, 0, &mut v)?;
    Ok(v)
}

/// Shift taking window grades to Koszul grades: `H^r` at `g - sum deg x_i`
/// is `M / (x) M` at `g`.
pub fn koszul_shift<F: Field>(ring: &RingRef<F>, seq: &[Polynomial<F>]) -> Result<Grade> {
    let mut total = Grade::from_elem(0, ring.grading().rank());
    for x in seq {
        total = grade_add(&total, &ring.degree_of(x)?);
    }
    Ok(total.iter().map(|v| -v).collect())
}

/// Verdict on the vanishing of `H^i(seq; M)` for each `i` in `indices`, at
/// the window grades shifted by [`koszul_shift`].
pub fn koszul_vanishing<F: Field>(
    seq: &[Polynomial<F>],
    m: &ModuleRef<F>,
    indices: &[usize],
    budget: &Budget,
    criterion: &str,
) -> Result<Verdict<F::Elem>> {
    check_sequence(seq, m.as_ref())?;
    let mut v = Verdict::new(criterion, seq, m.as_ref(), budget);
    if nonvanishing_grade(m.as_ref(), budget)?.is_none() {
        module_vanishes(&mut v);
        return Ok(v);
    }
    let ring = m.ring();
    let field = m.field();
    let grades = budget.shifted_grades(ring.grading(), &koszul_shift(ring, seq)?)?;
    let mut unsettled = 0;
    for &i in indices {
        let h = koszul_module(seq, m, i)?;
        for g in &grades {
            let p = probe(h.as_ref(), g, budget)?;
            let out = outcome(&p);
            v.slices.push(SliceCheck {
                step: i,
                grade: g.clone(),
                outcome: out,
                stability: p.stability,
                detail: p.describe(),
            });
            match (out, &p.settle) {
                (Status::Fails, Settle::Persists { level, witness }) => {
                    let key = Key::new(g.clone(), *level);
                    let class = render_combination(field, &h.labels(&key)?, witness);
                    v.counterexample = Some(Counterexample {
                        step: i,
                        module: h.descriptor(),
                        grade: g.clone(),
                        level: *level,
                        top: p.top_level(),
                        class: class.clone(),
                        coords: witness.clone(),
                        stable: true,
                    });
                    v.status = Status::Fails;
                    v.reason = format!("H^{i} has the class {class} at {}", render_grade(g));
                    return Ok(v);
                }
                (Status::Holds, _) => {}
                _ => unsettled += 1,
            }
        }
    }
    if unsettled > 0 {
        v.reason = format!("{unsettled} slices unsettled or unstable under the budget");
    } else {
        v.status = Status::Holds;
    }
    Ok(v)
}

/// Coregularity through the vanishing of `H^i(seq; M)` for `1 <= i <= r`.
pub fn is_coregular_koszul<F: Field>(
    seq: &[Polynomial<F>],
    m: &ModuleRef<F>,
    budget: &Budget,
) -> Result<Verdict<F::Elem>> {
    // the top index is the cheapest and the likeliest to fail
    let indices: Vec<usize> = (1..=seq.len()).rev().collect();
    koszul_vanishing(seq, m, &indices, budget, "coregular by Koszul vanishing")
}

#[derive(Clone, Debug)]
pub struct CodepthReport {
    /// Longest sequence verified to hold.
    pub length: usize,
    /// Every verified sequence of that length.
    pub witnesses: Vec<Vec<String>>,
    pub pool: Vec<String>,
    /// Pool entries dropped because they are not in the ambient ideal.
    pub rejected: Vec<String>,
    pub max_len: usize,
    pub tried: usize,
    pub inconclusive: Vec<Vec<String>>,
    pub note: String,
}

impl CodepthReport {
    pub fn describe(&self) -> String {
        let mut s = format!("codepth >= {} under this pool", self.length);
        for w in &self.witnesses {
            let _ = write!(s, "\n  witness ({})", w.join(", "));
        }
        let _ = write!(s, "\n  {}", self.note);
        s
    }
}

/// Declared elements followed by the monomials of degree `<= max_degree` in
/// the ambient ideal, monomials in increasing degree and then decreasing
/// graded reverse lexicographic order.
pub fn default_pool<F: Field>(
    m: &dyn GradedModule<F>,
    declared: &[Polynomial<F>],
    max_degree: i64,
) -> Result<Vec<Polynomial<F>>> {
    let ring = m.ring();
    let field = ring.field();
    let mut pool: Vec<Polynomial<F>> = Vec::new();
    for p in declared {
        if !pool.contains(p) {
            pool.push(p.clone());
        }
    }
    if m.ambient_ideal().is_empty() {
        return Ok(pool);
    }
    for d in 1..=max_degree {
        for e in monomials_of_degree(ring.nvars(), d) {
            let p = Polynomial::monomial(field, e, field.one());
            if pool.contains(&p) {
                continue;
            }
            if ideal_membership_bounded(&p, m.ambient_ideal(), d)?.is_member() {
                pool.push(p);
            }
        }
    }
    Ok(pool)
}

/// Depth-first search over sequences drawn from `pool` in increasing pool
/// order, extending only sequences that hold. Reordering is not searched:
/// a coregular sequence stays coregular under permutation.
pub fn codepth_search<F: Field>(
    m: &ModuleRef<F>,
    pool: &[Polynomial<F>],
    max_len: usize,
    budget: &Budget,
) -> Result<CodepthReport> {
    let ring = m.ring();
    let max_len = max_len.min(ring.nvars());
    let mut usable = Vec::new();
    let mut rejected = Vec::new();
    for p in pool {
        match require_in_ambient(m.as_ref(), p) {
            Ok(()) => usable.push(p.clone()),
            Err(Error::Precondition(_)) => rejected.push(ring.render(p)),
            Err(e) => return Err(e),
        }
    }
    let mut report = CodepthReport {
        length: 0,
        witnesses: Vec::new(),
        pool: usable.iter().map(|p| ring.render(p)).collect(),
        rejected,
        max_len,
        tried: 0,
        inconclusive: Vec::new(),
        note: String::new(),
    };
    let degenerate = nonvanishing_grade(m.as_ref(), budget)?.is_none();
    if !degenerate && max_len > 0 {
        let mut prefix = Vec::new();
        search(m, &usable, &mut prefix, 0, max_len, budget, &mut report)?;
    }
    report.note = if degenerate {
        "module vanishes in window; nothing searched".into()
    } else {
        format!(
            "searched {} sequences of length <= {} from a pool of {} ({} rejected, {} inconclusive); upper bound only dim A = {}",
            report.tried,
            max_len,
            report.pool.len(),
            report.rejected.len(),
            report.inconclusive.len(),
            ring.nvars()
        )
    };
    Ok(report)
}

fn search<F: Field>(
    m: &ModuleRef<F>,
    pool: &[Polynomial<F>],
    prefix: &mut Vec<usize>,
    start: usize,
    max_len: usize,
    budget: &Budget,
    report: &mut CodepthReport,
) -> Result<()> {
    let ring = m.ring();
    for j in start..pool.len() {
        prefix.push(j);
        let seq: Vec<Polynomial<F>> = prefix.iter().map(|&k| pool[k].clone()).collect();
        let names: Vec<String> = seq.iter().map(|p| ring.render(p)).collect();
        report.tried += 1;
        // the prefix already holds, so only the new step is checked
        let mut v = Verdict::new("coregular by definition", &seq, m.as_ref(), budget);
        definition_steps(&seq, m, budget, seq.len() - 1, &mut v)?;
        match v.status {
            Status::Holds => {
                if seq.len() > report.length {
                    report.length = seq.len();
                    report.witnesses.clear();
                }
                if seq.len() == report.length {
                    report.witnesses.push(names);
                }
                if seq.len() < max_len {
                    search(m, pool, prefix, j + 1, max_len, budget, report)?;
                }
            }
            Status::Inconclusive => report.inconclusive.push(names),
            Status::Fails => {}
        }
        prefix.pop();
    }
    Ok(())
}

/// Attempts to extend `prefix` by one element.
#[derive(Clone, Debug)]
pub struct ExtensionReport<E> {
    pub prefix: Verdict<E>,
    /// One verdict per pool element outside the prefix; only the new step is
    /// checked, and nothing is tried unless the prefix holds.
    pub extensions: Vec<Verdict<E>>,
}

impl<E> ExtensionReport<E> {
    /// `Fails` if every extension fails, `Holds` if one holds.
    pub fn status(&self) -> Status {
        if self.extensions.iter().any(|v| v.holds()) {
            Status::Holds
        } else if !self.extensions.is_empty() && self.extensions.iter().all(|v| v.fails()) {
            Status::Fails
        } else {
            Status::Inconclusive
        }
    }

    pub fn describe(&self) -> String {
        let mut s = format!("prefix ({}): {}", self.prefix.seq.join(", "), self.prefix.status.as_str());
        for v in &self.extensions {
            let _ = write!(s, "\n  + {}: {}", v.seq.last().map(String::as_str).unwrap_or(""), v.status.as_str());
            if !v.reason.is_empty() {
                let _ = write!(s, " ({})", v.reason);
            }
        }
        s
    }
}

/// Checks `prefix` by definition, then each one-element extension from `pool`.
pub fn coregular_extensions<F: Field>(
    m: &ModuleRef<F>,
    prefix: &[Polynomial<F>],
    pool: &[Polynomial<F>],
    budget: &Budget,
) -> Result<ExtensionReport<F::Elem>> {
    let head = is_coregular_definition(prefix, m, budget)?;
    let mut extensions = Vec::new();
    if head.holds() {
        for p in pool.iter().filter(|p| !prefix.contains(p)) {
            let mut seq = prefix.to_vec();
            seq.push(p.clone());
            require_in_ambient(m.as_ref(), p)?;
            let mut v = Verdict::new("coregular by definition", &seq, m.as_ref(), budget);
            definition_steps(&seq, m, budget, prefix.len(), &mut v)?;
            extensions.push(v);
        }
    }
    Ok(ExtensionReport { prefix: head, extensions })
}

/// Certificate for `g^e ∈ (seq)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalCertificate {
    pub generator: String,
    pub exponent: Option<u32>,
    /// `Some(false)` when no power can ever lie in the ideal (monomial case).
    pub possible: Option<bool>,
    pub certificate: Vec<String>,
}

/// Side `sqrt(I) ⊆ sqrt(seq)` of the radical comparison, generator by
/// generator. Monomial data are decided exactly: a power of a monomial lies
/// in a monomial ideal iff some generator's support is inside its support.
pub fn radical_side<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    seq: &[Polynomial<F>],
    cap: u32,
) -> Result<(Status, Vec<RadicalCertificate>)> {
    let mut certs = Vec::new();
    let mut status = Status::Holds;
    let monomial = seq.iter().all(|x| x.is_monomial());
    for g in gens {
        let deg = g.homogeneous_degree().ok_or_else(|| Error::NotHomogeneous(ring.render(g)))?;
        let possible = if monomial && g.is_monomial() {
            let support = |p: &Polynomial<F>| -> Vec<usize> {
                let (e, _) = p.leading_term().expect("monomial");
                (0..e.nvars()).filter(|&i| e.0[i] > 0).collect()
            };
            let sg = support(g);
            Some(seq.iter().any(|x| support(x).iter().all(|i| sg.contains(i))))
        } else {
            None
        };
        let found = if possible == Some(false) {
            None
        } else {
            radical_exponent(g, seq, cap as i64 * deg.max(1))?
        };
        let cert = match &found {
            Some((e, c)) => RadicalCertificate {
                generator: ring.render(g),
                exponent: Some(*e),
                possible: Some(true),
                certificate: c
                    .iter()
                    .zip(seq)
                    .filter(|(p, _)| !p.is_zero())
                    .map(|(p, x)| format!("({})*({})", ring.render(p), ring.render(x)))
                    .collect(),
            },
            None => {
                status = status.and(if possible == Some(false) { Status::Fails } else { Status::Inconclusive });
                RadicalCertificate {
                    generator: ring.render(g),
                    exponent: None,
                    possible,
                    certificate: Vec::new(),
                }
            }
        };
        certs.push(cert);
    }
    Ok((status, certs))
}

/// `H^i(seq; A) = 0` for `i < r` on the window: `seq` is `A`-regular there.
pub fn regular_on_ring<F: Field>(ring: &RingRef<F>, seq: &[Polynomial<F>], budget: &Budget) -> Result<()> {
    let a: ModuleRef<F> = Arc::new(FreeModule::new(ring));
    let grades = budget.shifted_grades(ring.grading(), &koszul_shift(ring, seq)?)?;
    for i in 0..seq.len() {
        let h = koszul_module(seq, &a, i)?;
        for g in &grades {
            if h.dim(&Key::new(g.clone(), 0))? != 0 {
                return Err(Error::Precondition(format!(
                    "({}) is not a regular sequence on the ring: H^{i} is nonzero at {}",
                    seq.iter().map(|x| ring.render(x)).collect::<Vec<_>>().join(", "),
                    render_grade(g)
                )));
            }
        }
    }
    Ok(())
}

/// Stable vanishing of `H^i_I(A)` for each `i` in `indices` on the window.
pub fn local_cohomology_vanishing<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    indices: impl IntoIterator<Item = usize>,
    budget: &Budget,
) -> Result<(Status, Vec<String>)> {
    let mut status = Status::Holds;
    let mut notes = Vec::new();
    let grades = budget.grades(ring.grading())?;
    for i in indices {
        let h = local_cohomology_module(ring, gens, i)?;
        let mut local = Status::Holds;
        for g in &grades {
            let p = probe(h.as_ref(), g, budget)?;
            match outcome(&p) {
                Status::Holds => {}
                Status::Fails => {
                    notes.push(format!("H^{i}_I(A) is nonzero: {}", p.describe()));
                    local = Status::Fails;
                    break;
                }
                Status::Inconclusive => {
                    notes.push(format!("H^{i}_I(A) unsettled: {}", p.describe()));
                    local = local.and(Status::Inconclusive);
                }
            }
        }
        if local == Status::Holds {
            notes.push(format!("H^{i}_I(A) vanishes on {} grades", grades.len()));
        }
        status = status.and(local);
    }
    Ok((status, notes))
}

fn require_members<F: Field>(ring: &RingRef<F>, gens: &[Polynomial<F>], elems: &[Polynomial<F>]) -> Result<()> {
    for x in elems {
        let deg = x.homogeneous_degree().ok_or_else(|| Error::NotHomogeneous(ring.render(x)))?;
        if !ideal_membership_bounded(x, gens, deg)?.is_member() {
            return Err(Error::Precondition(format!("{} is not in the ideal", ring.render(x))));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct HellusReport<E> {
    pub status: Status,
    pub radical: Status,
    pub certificates: Vec<RadicalCertificate>,
    pub coregular: Verdict<E>,
    pub higher: Status,
    pub higher_notes: Vec<String>,
    /// Both sides conclusive and different.
    pub discrepancy: bool,
}

impl<E> HellusReport<E> {
    pub fn cohomology_side(&self) -> Status {
        self.coregular.status.and(self.higher)
    }

    pub fn describe(&self) -> String {
        let mut s = format!("radical criterion: {}\n", self.status.as_str());
        let _ = writeln!(s, "  (i) radicals agree: {}", self.radical.as_str());
        for c in &self.certificates {
            match c.exponent {
                Some(e) => {
                    let _ = writeln!(s, "    ({})^{e} = {}", c.generator, c.certificate.join(" + "));
                }
                None if c.possible == Some(false) => {
                    let _ = writeln!(s, "    no power of {} lies in the ideal", c.generator);
                }
                None => {
                    let _ = writeln!(s, "    no power of {} found under the cap", c.generator);
                }
            }
        }
        let _ = writeln!(s, "  (ii) cohomology side: {}", self.cohomology_side().as_str());
        for line in self.coregular.describe().lines() {
            let _ = writeln!(s, "    {line}");
        }
        for n in &self.higher_notes {
            let _ = writeln!(s, "    {n}");
        }
        if self.discrepancy {
            let _ = writeln!(s, "  DISCREPANCY between the two sides");
        }
        s
    }
}

/// Evaluates both sides of the equivalence between `sqrt(I) = sqrt(seq)` and
/// "`seq` is coregular on `H^r_I(A)` and `H^i_I(A) = 0` for `i > r`".
pub fn hellus_check<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    seq: &[Polynomial<F>],
    budget: &Budget,
) -> Result<HellusReport<F::Elem>> {
    require_members(ring, gens, seq)?;
    regular_on_ring(ring, seq, budget)?;
    let r = seq.len();
    let (radical, certificates) = radical_side(ring, gens, seq, budget.cap)?;
    let m: ModuleRef<F> = local_cohomology_module(ring, gens, r)?;
    let coregular = is_coregular_koszul(seq, &m, budget)?;
    // the Čech complex on the generators has no terms past gens.len()
    let (higher, higher_notes) = local_cohomology_vanishing(ring, gens, r + 1..=gens.len(), budget)?;
    let side_ii = coregular.status.and(higher);
    let discrepancy = radical.is_conclusive() && side_ii.is_conclusive() && radical != side_ii;
    let status = if discrepancy || !radical.is_conclusive() || !side_ii.is_conclusive() {
        Status::Inconclusive
    } else {
        radical
    };
    Ok(HellusReport {
        status,
        radical,
        certificates,
        coregular,
        higher,
        higher_notes,
        discrepancy,
    })
}

#[derive(Clone, Debug)]
pub struct ThreeSurfaceReport<E> {
    pub status: Status,
    /// Vanishing of `H^i_I(A)` for `i > 2`.
    pub hypothesis: Status,
    pub hypothesis_notes: Vec<String>,
    /// `H^2` and `H^3` of `(f, g, h)` on `H^2_I(A)`.
    pub cohomology: Verdict<E>,
    pub radical: Status,
    pub certificates: Vec<RadicalCertificate>,
}

impl<E> ThreeSurfaceReport<E> {
    pub fn describe(&self) -> String {
        let mut s = format!("three-surface criterion: {}\n", self.status.as_str());
        let _ = writeln!(s, "  hypothesis H^i_I(A) = 0 for i > 2: {}", self.hypothesis.as_str());
        for n in &self.hypothesis_notes {
            let _ = writeln!(s, "    {n}");
        }
        let _ = writeln!(s, "  (2) H^2, H^3 (f,g,h; M) vanish: {}", self.cohomology.status.as_str());
        for line in self.cohomology.describe().lines() {
            let _ = writeln!(s, "    {line}");
        }
        let _ = writeln!(s, "  (1) radicals agree: {}", self.radical.as_str());
        for c in &self.certificates {
            if let Some(e) = c.exponent {
                let _ = writeln!(s, "    ({})^{e} in (f, g, h)", c.generator);
            }
        }
        s
    }
}

/// Condition (2) `H^i(f,g,h; H^2_I(A)) = 0` for `i >= 2`, with condition (1)
/// cross-evaluated by the membership oracle.
pub fn three_surface_check<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    fgh: [&Polynomial<F>; 3],
    budget: &Budget,
) -> Result<ThreeSurfaceReport<F::Elem>> {
    let [f, g, h] = fgh;
    let seq = vec![f.clone(), g.clone(), h.clone()];
    require_members(ring, gens, &seq)?;
    regular_on_ring(ring, &[f.clone(), h.clone()], budget)?;
    let (hypothesis, hypothesis_notes) = local_cohomology_vanishing(ring, gens, 3..=gens.len(), budget)?;
    if hypothesis == Status::Fails {
        return Err(Error::Precondition(format!(
            "local cohomology above index 2 does not vanish: {}",
            hypothesis_notes.join("; ")
        )));
    }
    let m: ModuleRef<F> = local_cohomology_module(ring, gens, 2)?;
    let cohomology = koszul_vanishing(&seq, &m, &[3, 2], budget, "Koszul vanishing in degrees 2, 3")?;
    let (radical, certificates) = radical_side(ring, gens, &seq, budget.cap)?;
    let status = hypothesis.and(cohomology.status);
    Ok(ThreeSurfaceReport {
        status,
        hypothesis,
        hypothesis_notes,
        cohomology,
        radical,
        certificates,
    })
}

/// The connecting map at one grade `k` of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSlice {
    pub grade: Grade,
    /// Grade of the target `H^2(f, g; M_1)`.
    pub target_grade: Grade,
    pub source_dim: usize,
    pub target_dim: usize,
    /// Rank of the surviving part of the target.
    pub surviving: usize,
    /// Rank of the image inside the surviving part.
    pub image: usize,
    pub level: u32,
    pub outcome: Status,
    pub stability: Stability,
}

#[derive(Clone, Debug)]
pub struct DeltaReport<E> {
    pub status: Status,
    pub slices: Vec<DeltaSlice>,
    /// `M_i = 0` for `i > 2`.
    pub condition_a: Status,
    pub condition_a_notes: Vec<String>,
    /// `(f, g)` coregular on `M_2`.
    pub condition_b: Verdict<E>,
}

impl<E> DeltaReport<E> {
    pub fn surjective(&self) -> Status {
        self.slices.iter().fold(Status::Holds, |s, d| s.and(d.outcome))
    }

    pub fn describe(&self) -> String {
        let mut s = format!("delta surjectivity: {}\n", self.status.as_str());
        let _ = writeln!(s, "  (a) M_i = 0 for i > 2: {}", self.condition_a.as_str());
        for n in &self.condition_a_notes {
            let _ = writeln!(s, "    {n}");
        }
        let _ = writeln!(s, "  (b) (f, g) coregular on M_2: {}", self.condition_b.status.as_str());
        let _ = writeln!(s, "  (c) delta surjective: {}", self.surjective().as_str());
        for d in self.slices.iter().filter(|d| d.target_dim > 0) {
            let _ = writeln!(
                s,
                "    {} -> {}: source {} target {} surviving {} image {} at level {} ({})",
                render_grade(&d.grade),
                render_grade(&d.target_grade),
                d.source_dim,
                d.target_dim,
                d.surviving,
                d.image,
                d.level,
                d.stability.as_str()
            );
        }
        s
    }
}

/// The coboundary `H^0(f, g; M_2) -> H^2(f, g; M_1)` for `B = A/h`, where
/// `M_1 = 0 :_M h` and `M_2 = M / hM` with `M = H^2_I(A)`.
///
/// A class `u` lifts to `M`; solving `h v_f = f u` and `h v_g = g u` gives
/// `w = g v_f - f v_g` in `M_1`, whose class is `delta(u)` at grade
/// `k - deg h`.
pub fn delta_surjectivity_check<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    fgh: [&Polynomial<F>; 3],
    budget: &Budget,
) -> Result<DeltaReport<F::Elem>> {
    let [f, g, h] = fgh;
    require_members(ring, gens, &[f.clone(), g.clone()])?;
    regular_on_ring(ring, &[h.clone(), f.clone()], budget)
        .map_err(|e| Error::Precondition(format!("f is a zero divisor modulo h: {e}")))?;
    let (mut condition_a, mut condition_a_notes) = local_cohomology_vanishing(ring, gens, 3..=gens.len(), budget)?;
    // M_1 and M_2 are read off H^2_I(A) only when H^1_I(A) vanishes as well
    let (one, notes) = local_cohomology_vanishing(ring, gens, [1], budget)?;
    condition_a = condition_a.and(one);
    condition_a_notes.extend(notes);
    let m: ModuleRef<F> = local_cohomology_module(ring, gens, 2)?;
    let m1 = Arc::new(KernelModule::new(m.clone(), std::slice::from_ref(h))?);
    let m2 = Arc::new(QuotientModule::new(m.clone(), h)?);
    let m2_ref: ModuleRef<F> = m2.clone();
    let m1_ref: ModuleRef<F> = m1.clone();
    let source = KernelModule::new(m2_ref.clone(), &[f.clone(), g.clone()])?;
    let target = QuotientModule::by_elements(m1_ref, &[f.clone(), g.clone()])?;
    let condition_b = is_coregular_koszul(&[f.clone(), g.clone()], &m2_ref, budget)?;

    let df = ring.degree_of(f)?;
    let dg = ring.degree_of(g)?;
    let dh = ring.degree_of(h)?;
    let field = ring.field();
    let exact = m.is_exact();
    let mut slices = Vec::new();
    for k in budget.grades(ring.grading())? {
        let t_grade = grade_sub(&grade_add(&grade_add(&k, &df), &dg), &dh);
        let level = if exact { 0 } else { budget.max_level.saturating_sub(2).max(budget.min_level) };
        let src_key = Key::new(k.clone(), level);
        let source_dim = source.dim(&src_key)?;
        // images of the source basis in M_1 at t_grade, pushed to a common level
        let mut images: Vec<ElementHandle<F::Elem>> = Vec::new();
        let mut solved = true;
        for j in 0..source_dim {
            let u2 = source.to_parent(&src_key, &SparseVec::unit(field, j))?;
            let u = ElementHandle {
                key: src_key.clone(),
                coeffs: m2.slice(&src_key)?.lift(field, &u2),
            };
            match coboundary(m.as_ref(), m1.as_ref(), [f, g, h], &u, budget.max_level)? {
                Some(w) => images.push(w),
                None => {
                    solved = false;
                    break;
                }
            }
        }
        let top = images.iter().map(|w| w.key.level).max().unwrap_or(level);
        let t_key = Key::new(t_grade.clone(), top);
        let target_dim = target.dim(&t_key)?;
        let slice = target.slice(&t_key)?;
        let mut cols = Vec::new();
        for w in &images {
            let w = push_to_level(m1.as_ref(), w, top)?;
            cols.push(slice.coords(&w.coeffs)?);
        }
        let img = Matrix::from_columns(target_dim, cols);
        // classes that still exist two levels up
        let (survive, stability) = if exact {
            (Matrix::identity(field, target_dim), Stability::Exact)
        } else {
            let mut c = Matrix::identity(field, target_dim);
            let mut n = top;
            while n < budget.max_level && n < top + 2 {
                c = target.transition(&Key::new(t_grade.clone(), n))?.mul(field, &c);
                n += 1;
            }
            let st = if n == top + 2 && solved { Stability::Stable } else { Stability::Unstable };
            (c, st)
        };
        let surviving = survive.rank(field);
        let image = survive.mul(field, &img).rank(field);
        let outcome = match (image == surviving, stability != Stability::Unstable, solved) {
            (true, true, _) => Status::Holds,
            (false, true, true) => Status::Fails,
            _ => Status::Inconclusive,
        };
        slices.push(DeltaSlice {
            grade: k,
            target_grade: t_grade,
            source_dim,
            target_dim,
            surviving,
            image,
            level: top,
            outcome,
            stability,
        });
    }
    let surj = slices.iter().fold(Status::Holds, |s, d| s.and(d.outcome));
    let status = condition_a.and(condition_b.status).and(surj);
    Ok(DeltaReport {
        status,
        slices,
        condition_a,
        condition_a_notes,
        condition_b,
    })
}

/// `delta(u)` as an element of `M_1`, solving at increasing levels.
fn coboundary<F: Field>(
    m: &dyn GradedModule<F>,
    m1: &KernelModule<F>,
    fgh: [&Polynomial<F>; 3],
    u: &ElementHandle<F::Elem>,
    max_level: u32,
) -> Result<Option<ElementHandle<F::Elem>>> {
    let [f, g, h] = fgh;
    let field = m.field();
    let top = if m.is_exact() { u.key.level } else { max_level.max(u.key.level) };
    for level in u.key.level..=top {
        let u = push_to_level(m, u, level)?;
        let fu = crate::module::apply_mult(m, f, &u)?;
        let gu = crate::module::apply_mult(m, g, &u)?;
        let (Some((lf, vf)), Some((lg, vg))) = (preimage(m, h, &fu, level)?, preimage(m, h, &gu, level)?) else {
            continue;
        };
        debug_assert!(lf == level && lg == level);
        let dh = m.ring().degree_of(h)?;
        let vf = ElementHandle {
            key: Key::new(grade_sub(&fu.key.grade, &dh), lf),
            coeffs: vf,
        };
        let vg = ElementHandle {
            key: Key::new(grade_sub(&gu.key.grade, &dh), lg),
            coeffs: vg,
        };
        let a = crate::module::apply_mult(m, g, &vf)?;
        let b = crate::module::apply_mult(m, f, &vg)?;
        let w = a.coeffs.sub(field, &b.coeffs);
        let coords = m1.coords_of_parent(&a.key, &w)?;
        return Ok(Some(ElementHandle { key: a.key, coeffs: coords }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::module::InverseSystem;
    use crate::ring::Ring;

    type Q = Rationals;

    fn ring4() -> RingRef<Q> {
        Ring::fine(Rationals, 4)
    }

    fn polys(r: &RingRef<Q>, s: &[&str]) -> Vec<Polynomial<Q>> {
        s.iter().map(|p| r.parse(p).unwrap()).collect()
    }

    #[test]
    fn complete_intersection_pair_holds_both_ways() {
        let r = ring4();
        let m: ModuleRef<Q> = local_cohomology_module(&r, &polys(&r, &["x", "y"]), 2).unwrap();
        let b = Budget::fine(-3, 2);
        let seq = polys(&r, &["x", "y"]);
        let d = is_coregular_definition(&seq, &m, &b).unwrap();
        assert_eq!(d.status, Status::Holds, "{}", d.describe());
        assert!(d.witness_total > 0);
        let k = is_coregular_koszul(&seq, &m, &b).unwrap();
        assert_eq!(k.status, Status::Holds, "{}", k.describe());
    }

    #[test]
    fn finitely_generated_module_fails() {
        let r = ring4();
        let a: ModuleRef<Q> = Arc::new(FreeModule::new(&r));
        let ideal = polys(&r, &["x", "y"]);
        let m: ModuleRef<Q> = Arc::new(QuotientModule::by_elements(a, &ideal).unwrap().with_ideal(ideal.clone()));
        let b = Budget::fine(-1, 2);
        let x = polys(&r, &["x"]);
        let d = is_coregular_definition(&x, &m, &b).unwrap();
        assert_eq!(d.status, Status::Fails);
        let c = d.counterexample.unwrap();
        assert_eq!(c.grade.as_slice(), &[0, 0, 0, 0]);
        let k = is_coregular_koszul(&x, &m, &b).unwrap();
        assert_eq!(k.status, Status::Fails);
        // H^1(x; M) at -1 is M/xM at 0
        assert_eq!(k.counterexample.unwrap().grade.as_slice(), &[-1, 0, 0, 0]);
    }

    #[test]
    fn element_outside_ideal_is_a_precondition_error() {
        let r = ring4();
        let m: ModuleRef<Q> = Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap());
        let z = polys(&r, &["z"]);
        assert!(matches!(
            is_coregular_definition(&z, &m, &Budget::fine(-2, 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn vanishing_module_is_inconclusive() {
        let r = ring4();
        let m: ModuleRef<Q> = Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap());
        let v = is_coregular_definition(&polys(&r, &["x"]), &m, &Budget::fine(0, 2)).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.reason, "module vanishes in window");
    }

    #[test]
    fn codepth_of_inverse_system() {
        let r = ring4();
        let m: ModuleRef<Q> = local_cohomology_module(&r, &polys(&r, &["x", "y"]), 2).unwrap();
        let pool = polys(&r, &["x", "y", "z", "w"]);
        let rep = codepth_search(&m, &pool, 2, &Budget::fine(-3, 1)).unwrap();
        assert_eq!(rep.length, 2);
        assert_eq!(rep.witnesses, vec![vec!["x".to_string(), "y".to_string()]]);
        assert_eq!(rep.rejected, vec!["z".to_string(), "w".to_string()]);
    }

    #[test]
    fn radical_side_on_monomials() {
        let r = ring4();
        let gens = polys(&r, &["x*z", "x*w", "y*z", "y*w"]);
        let (s, certs) = radical_side(&r, &gens, &polys(&r, &["x*z", "y*w"]), 4).unwrap();
        assert_eq!(s, Status::Fails);
        assert_eq!(certs[1].possible, Some(false));
        let (s, _) = radical_side(&r, &polys(&r, &["x", "y"]), &polys(&r, &["x", "y"]), 4).unwrap();
        assert_eq!(s, Status::Holds);
    }

    #[test]
    fn zero_divisor_modulo_h_is_rejected() {
        let r = ring4();
        let gens = polys(&r, &["x", "y"]);
        let [f, g, h] = [r.parse("x").unwrap(), r.parse("y").unwrap(), r.parse("x*y").unwrap()];
        let e = delta_surjectivity_check(&r, &gens, [&f, &g, &h], &Budget::fine(-2, 1));
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn delta_trivial_when_h_is_regular_on_the_quotient() {
        let r = ring4();
        let gens = polys(&r, &["x", "y"]);
        let [f, g, h] = [r.parse("x").unwrap(), r.parse("y").unwrap(), r.parse("z").unwrap()];
        let rep = delta_surjectivity_check(&r, &gens, [&f, &g, &h], &Budget::fine(-3, 1)).unwrap();
        assert!(rep.slices.iter().all(|d| d.target_dim == 0));
        assert_eq!(rep.surjective(), Status::Holds);
        assert_eq!(rep.status, Status::Holds, "{}", rep.describe());
    }
}
