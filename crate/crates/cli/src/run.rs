//! Scenario dispatch: builds the ring and modules, runs each step, and
//! collects sections and outcomes into a report.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use codepth::budget::{probe, Budget, Probe, Stability, Window};
use codepth::coregular::{
    codepth_search, coregular_extensions, default_pool, delta_surjectivity_check, hellus_check,
    is_coregular_definition, is_coregular_koszul, three_surface_check, Status, Verdict,
};
use codepth::field::DEFAULT_PRIME;
use codepth::grading::Grade;
use codepth::koszul::koszul_module;
use codepth::localcoh::{local_cohomology_module, mayer_vietoris_check};
use codepth::module::{
    dump_slice, DirectSum, FreeModule, GradedModule, InverseSystem, KernelModule, Key, ModuleRef,
    QuotientModule,
};
use codepth::poly::{parameterization_kernel, parse_polynomial, substitute_parameterization};
use codepth::quasicyclic::{
    cyclic_cover, pair_in_cyclic_search, skew_socle_obstruction, slice_element, PairSearch,
    SearchBounds, SocleOutcome,
};
use codepth::ring::{Ring, RingRef};
use codepth::{Field, Polynomial, PrimeField, Rationals};

use crate::error::{CliError, EXIT_INCONCLUSIVE, EXIT_MISMATCH, EXIT_OK};
use crate::report::{Expectation, Mismatch, Report, Section, SliceRow, StepReport, SCHEMA};
use crate::scenario::{Args, Command, ModuleDecl, Scenario, Step, WindowDecl};

/// Command-line overrides and output switches.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub field: Option<String>,
    pub window: Option<WindowDecl>,
    pub levels: Option<u32>,
    pub witnesses: bool,
    pub dump_slices: bool,
    pub timing: bool,
    pub cache_dir: Option<PathBuf>,
}

/// `q` or `fp:<p>` (`fp` alone means the default prime).
pub enum FieldChoice {
    Rationals,
    Prime(PrimeField),
}

pub fn parse_field(s: &str) -> Result<FieldChoice, CliError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldChoice::Rationals);
    }
    let p = match s.strip_prefix("fp") {
        Some("") => DEFAULT_PRIME,
        Some(rest) => rest
            .strip_prefix(':')
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| CliError::Validation(format!("field `{s}` is not q or fp:<p>")))?,
        None => return Err(CliError::Validation(format!("field `{s}` is not q or fp:<p>"))),
    };
    Ok(FieldChoice::Prime(PrimeField::new(p)?))
}

pub fn run_scenario(sc: &Scenario, opts: &Options) -> Result<Report, CliError> {
    let field = opts.field.clone().unwrap_or_else(|| sc.ring.field.clone());
    match parse_field(&field)? {
        FieldChoice::Rationals => run_with(Rationals, sc, opts),
        FieldChoice::Prime(fp) => run_with(fp, sc, opts),
    }
}

struct Ctx<'a, F: Field> {
    ring: RingRef<F>,
    ideal: Vec<Polynomial<F>>,
    elements: BTreeMap<String, String>,
    budget: Budget,
    opts: &'a Options,
}

/// What a step hands back besides its sections.
struct StepOut {
    sections: Vec<Section>,
    outcomes: Vec<(String, String)>,
    status: Option<Status>,
    dump_module: Option<Box<dyn FnOnce() -> Result<Vec<String>, CliError>>>,
}

impl StepOut {
    fn new() -> Self {
        StepOut {
            sections: Vec::new(),
            outcomes: Vec::new(),
            status: None,
            dump_module: None,
        }
    }

    fn outcome(&mut self, k: impl Into<String>, v: impl Into<String>) {
        self.outcomes.push((k.into(), v.into()));
    }
}

fn status_str(s: Status) -> String {
    s.as_str().to_ascii_lowercase()
}

pub fn build_budget(sc: &Scenario, opts: &Options, fine: bool) -> Result<Budget, CliError> {
    let window = opts.window.clone().or_else(|| sc.window.clone()).unwrap_or(if fine {
        WindowDecl::Box([-3, 3])
    } else {
        WindowDecl::Total {
            degrees: [-4, 2],
            span: 3,
        }
    });
    let window = match window {
        WindowDecl::Box([lo, hi]) => Window::Box { lo, hi },
        WindowDecl::Total { degrees: [lo, hi], span } => Window::Total { lo, hi, span },
    };
    if lo_hi(&window).0 > lo_hi(&window).1 {
        return Err(CliError::Validation("window bounds are reversed".into()));
    }
    Ok(Budget {
        window,
        min_level: sc.budget.min_level,
        max_level: opts.levels.unwrap_or(sc.budget.max_level),
        cap: sc.budget.cap,
        witnesses: opts.witnesses,
    })
}

fn lo_hi(w: &Window) -> (i64, i64) {
    match w {
        Window::Box { lo, hi } | Window::Total { lo, hi, .. } => (*lo, *hi),
    }
}

/// Ring and ideal of a scenario. A parameterized ideal comes with a section
/// listing the generators and their vanishing under substitution.
pub struct ScenarioIdeal<F: Field> {
    pub ring: RingRef<F>,
    pub ideal: Vec<Polynomial<F>>,
    pub parameterization: Option<Section>,
}

pub fn scenario_ideal<F: Field>(field: F, sc: &Scenario) -> Result<ScenarioIdeal<F>, CliError> {
    let names = sc.ring.vars.clone();
    let mut parameterization = None;
    let ideal_src: Vec<Polynomial<F>> = {
        let mut given = Vec::new();
        for (k, s) in sc.ideal.iter().enumerate() {
            given.push(parse_polynomial(&field, &names, s).map_err(|e| at(&format!("ideal[{k}]"), e))?);
        }
        match &sc.parameterization {
            None => given,
            Some(p) => {
                let imgs = p
                    .images
                    .iter()
                    .enumerate()
                    .map(|(k, s)| parse_polynomial(&field, &p.params, s).map_err(|e| at(&format!("parameterization.images[{k}]"), e)))
                    .collect::<Result<Vec<_>, _>>()?;
                if imgs.len() != names.len() {
                    return Err(CliError::Validation(format!(
                        "parameterization has {} images for {} variables",
                        imgs.len(),
                        names.len()
                    )));
                }
                let gens = if given.is_empty() {
                    parameterization_kernel(&imgs, p.degree)?
                } else {
                    given
                };
                let mut sec = Section::new("parameterization").status("verified");
                for g in &gens {
                    let s = substitute_parameterization(g, &imgs)?;
                    if !s.is_zero() {
                        return Err(CliError::Validation(format!(
                            "generator {} does not vanish on the parameterization",
                            g.render(&names)
                        )));
                    }
                    sec = sec.line(format!("{} -> 0", g.render(&names)));
                }
                parameterization = Some(sec);
                gens
            }
        }
    };
    let ring = Ring::detect(field.clone(), names.clone(), &ideal_src).map_err(|e| at("ideal", e))?;
    let ideal: Vec<Polynomial<F>> = ideal_src
        .iter()
        .map(|g| ring.parse(&g.render(&names)))
        .collect::<codepth::Result<_>>()?;
    Ok(ScenarioIdeal {
        ring,
        ideal,
        parameterization,
    })
}

fn run_with<F: Field>(field: F, sc: &Scenario, opts: &Options) -> Result<Report, CliError> {
    let start = Instant::now();
    if let Some(dir) = &opts.cache_dir {
        let store = crate::cache::FileStore::open(dir)?;
        codepth::store::install(Some(Arc::new(store)));
    } else {
        codepth::store::install(None);
    }
    let ScenarioIdeal { ring, ideal, parameterization: mut param_section } = scenario_ideal(field, sc)?;
    let budget = build_budget(sc, opts, ring.grading().is_fine())?;
    let ctx = Ctx {
        ring: ring.clone(),
        ideal,
        elements: sc.elements.clone(),
        budget,
        opts,
    };
    ctx.check_elements()?;

    let mut steps = Vec::new();
    let mut outcomes = BTreeMap::new();
    let mut statuses = Vec::new();
    let mut dumps = Vec::new();
    for (k, step) in sc.steps.iter().enumerate() {
        let mut out = ctx.step(step)?;
        if k == 0 {
            if let Some(sec) = param_section.take() {
                out.sections.insert(0, sec);
            }
        }
        let id = step.id();
        for (key, v) in &out.outcomes {
            outcomes.insert(format!("{id}.{key}"), v.clone());
        }
        if let Some(s) = out.status {
            statuses.push(s);
        }
        if opts.dump_slices {
            if let Some(d) = out.dump_module.take() {
                dumps.extend(d()?);
            }
        }
        steps.push(StepReport {
            id,
            command: step.command.as_str().to_string(),
            sections: out.sections,
        });
    }

    let mut expectation = Expectation::default();
    for step in &sc.steps {
        for (key, want) in &step.expect {
            let full = format!("{}.{key}", step.id());
            expectation.checked += 1;
            let got = outcomes.get(&full).cloned().unwrap_or_else(|| "<missing>".into());
            if &got != want {
                expectation.mismatches.push(Mismatch {
                    key: full,
                    expected: want.clone(),
                    actual: got,
                });
            }
        }
    }
    let exit_code = if !expectation.mismatches.is_empty() {
        EXIT_MISMATCH
    } else if sc.require_conclusive && statuses.iter().any(|s| !s.is_conclusive()) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    codepth::store::install(None);
    Ok(Report {
        schema: SCHEMA.into(),
        scenario: sc.name.clone(),
        field: ring.field().name(),
        ring: ring.describe(),
        ideal: ctx.ideal.iter().map(|g| ring.render(g)).collect(),
        budget: ctx.budget.describe(),
        steps,
        outcomes,
        expectation,
        exit_code,
        dumps,
        wall_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

fn at(what: &str, e: codepth::Error) -> CliError {
    CliError::Validation(format!("{what}: {e}"))
}

fn grade_vec(g: &Grade) -> Vec<i64> {
    g.iter().copied().collect()
}

fn probe_row<E>(table: &str, p: &Probe<E>) -> SliceRow {
    SliceRow {
        table: table.to_string(),
        grade: grade_vec(&p.grade),
        dim: p.estimate(),
        stability: p.stability.as_str().to_string(),
        detail: p.describe(),
    }
}

/// Verdict as a section: summary lines, then rows for every slice that did
/// not settle as vanishing.
fn verdict_section<E>(title: &str, v: &Verdict<E>, witnesses: bool) -> Section {
    let mut sec = Section::new(title).status(status_str(v.status)).text(&v.describe());
    for s in &v.slices {
        if s.outcome != Status::Holds {
            sec.slices.push(SliceRow {
                table: format!("step {}", s.step + 1),
                grade: grade_vec(&s.grade),
                dim: None,
                stability: s.stability.as_str().to_string(),
                detail: s.detail.clone(),
            });
        }
    }
    if witnesses {
        sec = sec.line(format!("witnesses {} (showing {})", v.witness_total, v.witnesses.len()));
        for w in &v.witnesses {
            sec = sec.line(format!("  {w}"));
        }
    }
    sec
}

impl<F: Field> Ctx<'_, F> {
    fn poly(&self, s: &str, what: &str) -> Result<Polynomial<F>, CliError> {
        let src = self.elements.get(s).map(String::as_str).unwrap_or(s);
        self.ring.parse(src).map_err(|e| at(what, e))
    }

    fn polys(&self, v: &[String], what: &str) -> Result<Vec<Polynomial<F>>, CliError> {
        v.iter()
            .enumerate()
            .map(|(k, s)| self.poly(s, &format!("{what}[{k}]")))
            .collect()
    }

    /// Every named element parses; polynomial ones must be homogeneous.
    fn check_elements(&self) -> Result<(), CliError> {
        for (name, src) in &self.elements {
            let p = self.ring.parse(src).map_err(|e| at(&format!("elements.{name}"), e))?;
            let laurent = p.terms().any(|(e, _)| !e.is_nonnegative());
            if !laurent {
                self.ring.degree_of(&p).map_err(|e| at(&format!("elements.{name}"), e))?;
            }
        }
        Ok(())
    }

    fn module(&self, decl: &ModuleDecl) -> Result<ModuleRef<F>, CliError> {
        Ok(match decl {
            ModuleDecl::LocalCohomology { index, ideal } => {
                let gens = match ideal {
                    Some(g) => self.polys(g, "module.ideal")?,
                    None => self.ideal.clone(),
                };
                local_cohomology_module(&self.ring, &gens, *index)?
            }
            ModuleDecl::Inverse { neg, free } => Arc::new(self.inverse(neg, free.as_deref())?),
            ModuleDecl::Sum { parts } => {
                let mut it = parts.iter();
                let first = it
                    .next()
                    .ok_or_else(|| CliError::Validation("sum module needs parts".into()))?;
                let mut acc = self.module(first)?;
                for p in it {
                    acc = Arc::new(DirectSum::new(acc, self.module(p)?)?);
                }
                acc
            }
            ModuleDecl::Quotient { of, by } => {
                Arc::new(QuotientModule::by_elements(self.module(of)?, &self.polys(by, "module.by")?)?)
            }
            ModuleDecl::Annihilator { of, by } => {
                Arc::new(KernelModule::new(self.module(of)?, &self.polys(by, "module.by")?)?)
            }
            ModuleDecl::Free => Arc::new(FreeModule::new(&self.ring)),
        })
    }

    fn inverse(&self, neg: &[String], free: Option<&[String]>) -> Result<InverseSystem<F>, CliError> {
        let rest: Vec<String>;
        let free = match free {
            Some(f) => f,
            None => {
                rest = self.ring.names().iter().filter(|n| !neg.contains(n)).cloned().collect();
                &rest
            }
        };
        let neg: Vec<&str> = neg.iter().map(String::as_str).collect();
        let free: Vec<&str> = free.iter().map(String::as_str).collect();
        Ok(InverseSystem::named(&self.ring, &neg, &free)?)
    }

    fn default_module(&self, args: &Args) -> Result<ModuleRef<F>, CliError> {
        match &args.module {
            Some(d) => self.module(d),
            None => Err(CliError::Validation("this command needs args.module".into())),
        }
    }

    fn need<'b, T>(v: &'b Option<T>, name: &str) -> Result<&'b T, CliError> {
        v.as_ref().ok_or_else(|| CliError::Validation(format!("missing args.{name}")))
    }

    fn level(&self, m: &dyn GradedModule<F>) -> u32 {
        if m.is_exact() {
            0
        } else {
            self.budget.min_level
        }
    }

    fn dumper(&self, m: ModuleRef<F>) -> Box<dyn FnOnce() -> Result<Vec<String>, CliError>> {
        let grades = self.budget.grades(self.ring.grading());
        let level = self.level(m.as_ref()) + if m.is_exact() { 0 } else { 2 };
        let vars: Vec<Polynomial<F>> = (0..self.ring.nvars()).map(|i| self.ring.var(i)).collect();
        Box::new(move || {
            let mut out = Vec::new();
            for g in grades? {
                let key = Key::new(g, level);
                if m.dim(&key)? > 0 {
                    out.push(dump_slice(m.as_ref(), &key, &vars)?);
                }
            }
            Ok(out)
        })
    }

    fn step(&self, step: &Step) -> Result<StepOut, CliError> {
        let a = &step.args;
        match step.command {
            Command::Lc => self.lc(a),
            Command::Koszul => self.koszul(a),
            Command::Coreg => self.coreg(a),
            Command::Codepth => self.codepth(a),
            Command::Hellus => self.hellus(a),
            Command::ThreeSurface => self.three_surface(a),
            Command::Quasicyclic => self.quasicyclic(a),
            Command::MayerVietoris => self.mayer_vietoris(a),
        }
    }

    /// Probes every window grade of `m` and summarizes it under `key`.
    fn slice_table(&self, m: &dyn GradedModule<F>, table: &str, key: &str, grades: &[Grade], out: &mut StepOut) -> Result<(), CliError> {
        let mut sec = Section::new(format!("{} on {}", table, m.descriptor()));
        let (mut zero, mut nonzero, mut unknown, mut total) = (0, 0, 0, 0);
        for g in grades {
            let p = probe(m, g, &self.budget)?;
            match p.estimate() {
                Some(0) => zero += 1,
                Some(d) => {
                    nonzero += 1;
                    total += d;
                    sec.slices.push(probe_row(table, &p));
                }
                None => {
                    unknown += 1;
                    sec.slices.push(probe_row(table, &p));
                }
            }
        }
        let verdict = if unknown > 0 {
            "inconclusive"
        } else if nonzero > 0 {
            "nonzero"
        } else {
            "vanishes"
        };
        sec = sec
            .status(verdict)
            .line(format!("{} grades: {zero} zero, {nonzero} nonzero, {unknown} unsettled", grades.len()))
            .line(format!("total dimension of settled slices {total}"));
        out.sections.push(sec);
        if unknown > 0 {
            out.status = Some(Status::Inconclusive);
        }
        out.outcome(key, verdict);
        out.outcome(format!("{key}.nonzero"), nonzero.to_string());
        out.outcome(format!("{key}.dim"), total.to_string());
        Ok(())
    }

    fn lc(&self, a: &Args) -> Result<StepOut, CliError> {
        let gens = match &a.seq {
            Some(s) => self.polys(s, "args.seq")?,
            None => self.ideal.clone(),
        };
        let indices: Vec<usize> = a.indices.clone().unwrap_or_else(|| (0..=gens.len()).collect());
        let grades = self.budget.grades(self.ring.grading())?;
        let mut out = StepOut::new();
        let mut dump = None;
        for i in indices {
            let m = local_cohomology_module(&self.ring, &gens, i)?;
            self.slice_table(m.as_ref(), &format!("H^{i}"), &format!("H{i}"), &grades, &mut out)?;
            if dump.is_none() && out.outcomes.iter().any(|(k, v)| k == &format!("H{i}") && v == "nonzero") {
                dump = Some(m as ModuleRef<F>);
            }
        }
        out.dump_module = dump.map(|m| self.dumper(m));
        Ok(out)
    }

    fn koszul(&self, a: &Args) -> Result<StepOut, CliError> {
        let seq = self.polys(Self::need(&a.seq, "seq")?, "args.seq")?;
        let m = self.default_module(a)?;
        let indices: Vec<usize> = a.indices.clone().unwrap_or_else(|| (0..=seq.len()).collect());
        let shift = codepth::coregular::koszul_shift(&self.ring, &seq)?;
        let grades = self.budget.shifted_grades(self.ring.grading(), &shift)?;
        let mut out = StepOut::new();
        out.sections.push(
            Section::new("Hom convention")
                .line("H^r(x; M) = (M/(x)M)(deg x_1 + ... + deg x_r); window shifted accordingly"),
        );
        for i in indices {
            let k = koszul_module(&seq, &m, i)?;
            self.slice_table(k.as_ref(), &format!("H^{i}(x; M)"), &format!("H{i}"), &grades, &mut out)?;
        }
        out.dump_module = Some(self.dumper(m));
        Ok(out)
    }

    fn coreg(&self, a: &Args) -> Result<StepOut, CliError> {
        let seq = self.polys(Self::need(&a.seq, "seq")?, "args.seq")?;
        let m = self.default_module(a)?;
        let method = a.method.as_deref().unwrap_or("both");
        let mut out = StepOut::new();
        let mut status: Option<Status> = None;
        let mut merge = |s: Status| {
            status = Some(match status {
                None => s,
                Some(t) if t == s => t,
                Some(t) if !t.is_conclusive() => s,
                Some(t) if !s.is_conclusive() => t,
                Some(_) => Status::Inconclusive,
            })
        };
        if matches!(method, "definition" | "both") {
            let v = is_coregular_definition(&seq, &m, &self.budget)?;
            out.outcome("definition", status_str(v.status));
            merge(v.status);
            out.sections.push(verdict_section("definition", &v, self.opts.witnesses));
            if let Some(c) = &v.counterexample {
                out.outcome("counterexample", format!("step {} grade {:?} stable {}", c.step + 1, grade_vec(&c.grade), c.stable));
            }
        }
        if matches!(method, "koszul" | "both") {
            let v = is_coregular_koszul(&seq, &m, &self.budget)?;
            out.outcome("koszul", status_str(v.status));
            merge(v.status);
            out.sections.push(verdict_section("Koszul vanishing", &v, self.opts.witnesses));
        }
        if !matches!(method, "definition" | "koszul" | "both") {
            return Err(CliError::Validation(format!("args.method `{method}` is not definition, koszul or both")));
        }
        if let Some(s) = status {
            out.outcome("verdict", status_str(s));
        }
        out.status = status;
        out.dump_module = Some(self.dumper(m));
        Ok(out)
    }

    fn codepth(&self, a: &Args) -> Result<StepOut, CliError> {
        let m = self.default_module(a)?;
        let declared = match &a.pool {
            Some(p) => self.polys(p, "args.pool")?,
            None => Vec::new(),
        };
        let pool = default_pool(m.as_ref(), &declared, a.pool_degree.unwrap_or(0))?;
        let mut out = StepOut::new();
        if let Some(prefix) = &a.prefix {
            let prefix = self.polys(prefix, "args.prefix")?;
            let rep = coregular_extensions(&m, &prefix, &pool, &self.budget)?;
            let mut sec = Section::new("one-element extensions").status(status_str(rep.status())).text(&rep.describe());
            sec.lines.push(format!("prefix budget: {}", rep.prefix.budget.describe()));
            out.sections.push(sec);
            out.outcome("prefix", status_str(rep.prefix.status));
            out.outcome("extensions", status_str(rep.status()));
            let fails = rep.extensions.iter().filter(|v| v.fails()).count();
            let inc = rep.extensions.iter().filter(|v| !v.status.is_conclusive()).count();
            out.outcome("extensions.fail", fails.to_string());
            out.outcome("extensions.inconclusive", inc.to_string());
            out.status = Some(rep.prefix.status);
        }
        let max_len = a.max_len.unwrap_or(self.ring.nvars());
        let rep = codepth_search(&m, &pool, max_len, &self.budget)?;
        let mut sec = Section::new("codepth search").text(&rep.describe());
        if !rep.rejected.is_empty() {
            sec = sec.line(format!("rejected (not in the ideal): {}", rep.rejected.join(", ")));
        }
        for s in &rep.inconclusive {
            sec = sec.line(format!("inconclusive ({})", s.join(", ")));
        }
        out.sections.push(sec.status(format!(">= {}", rep.length)));
        out.outcome("length", rep.length.to_string());
        out.outcome("witnesses", rep.witnesses.len().to_string());
        Ok(out)
    }

    fn hellus(&self, a: &Args) -> Result<StepOut, CliError> {
        let seq = self.polys(Self::need(&a.seq, "seq")?, "args.seq")?;
        let rep = hellus_check(&self.ring, &self.ideal, &seq, &self.budget)?;
        let mut out = StepOut::new();
        out.sections.push(Section::new("radical criterion").status(status_str(rep.status)).text(&rep.describe()));
        out.sections.push(verdict_section("coregular side", &rep.coregular, self.opts.witnesses));
        out.outcome("hellus", status_str(rep.status));
        out.outcome("radical", status_str(rep.radical));
        out.outcome("cohomology", status_str(rep.cohomology_side()));
        out.outcome("discrepancy", rep.discrepancy.to_string());
        for c in &rep.certificates {
            let e = c.exponent.map(|e| e.to_string()).unwrap_or_else(|| "none".into());
            out.outcome(format!("exponent({})", c.generator), e);
        }
        out.status = Some(rep.status);
        Ok(out)
    }

    fn three_surface(&self, a: &Args) -> Result<StepOut, CliError> {
        let fgh = match &a.fgh {
            Some(v) => self.polys(v, "args.fgh")?,
            None => self.ideal.clone(),
        };
        let [f, g, h] = fgh.as_slice() else {
            return Err(CliError::Validation(format!("three-surface needs three elements, got {}", fgh.len())));
        };
        let rep = three_surface_check(&self.ring, &self.ideal, [f, g, h], &self.budget)?;
        let mut out = StepOut::new();
        out.sections.push(Section::new("three-surface criterion").status(status_str(rep.status)).text(&rep.describe()));
        out.sections.push(verdict_section("H^2, H^3 vanishing", &rep.cohomology, self.opts.witnesses));
        out.outcome("three-surface", status_str(rep.status));
        out.outcome("hypothesis", status_str(rep.hypothesis));
        out.outcome("condition-1", status_str(rep.radical));
        out.outcome("condition-2", status_str(rep.cohomology.status));
        out.status = Some(rep.cohomology.status);
        if a.delta.unwrap_or(false) {
            let d = delta_surjectivity_check(&self.ring, &self.ideal, [f, g, h], &self.budget)?;
            out.sections.push(Section::new("delta surjectivity").status(status_str(d.status)).text(&d.describe()));
            out.outcome("delta", status_str(d.status));
            out.outcome("delta.condition-a", status_str(d.condition_a));
            out.outcome("delta.condition-b", status_str(d.condition_b.status));
            out.outcome("delta.surjective", status_str(d.surjective()));
        }
        Ok(out)
    }

    fn quasicyclic(&self, a: &Args) -> Result<StepOut, CliError> {
        let mode = a.mode.as_deref().unwrap_or("cover");
        let m_src = self.elements.get(Self::need(&a.m, "m")?).cloned().unwrap_or_else(|| a.m.clone().unwrap());
        let n_src = self.elements.get(Self::need(&a.n, "n")?).cloned().unwrap_or_else(|| a.n.clone().unwrap());
        let bounds = || SearchBounds {
            alpha_lo: a.alpha.map(|b| b[0]).unwrap_or(-6),
            alpha_hi: a.alpha.map(|b| b[1]).unwrap_or(0),
            deg_cap: a.deg_cap.unwrap_or(6),
        };
        let mut out = StepOut::new();
        match mode {
            "cover" => {
                let m = self.default_module(a)?;
                let lv = self.level(m.as_ref());
                let mh = slice_element(m.as_ref(), &m_src, lv)?;
                let nh = slice_element(m.as_ref(), &n_src, lv)?;
                let x = self.poly(Self::need(&a.x, "x")?, "args.x")?;
                let y = self.poly(Self::need(&a.y, "y")?, "args.y")?;
                let w = cyclic_cover(&m, &mh, &nh, &x, &y, &self.budget)?;
                let mut sec = Section::new("cyclic cover").status("found");
                sec = sec.line(format!("alpha = {}", w.alpha)).line(format!("i = {}, j = {}", w.i, w.j));
                for t in &w.transcripts {
                    sec = sec.line(t.clone());
                }
                out.sections.push(sec);
                out.outcome("cover", "found");
                out.outcome("alpha", w.alpha.clone());
                out.dump_module = Some(self.dumper(m));
            }
            "search" => {
                let m = self.default_module(a)?;
                let lv = self.level(m.as_ref());
                let mh = slice_element(m.as_ref(), &m_src, lv)?;
                let nh = slice_element(m.as_ref(), &n_src, lv)?;
                let r = pair_in_cyclic_search(m.as_ref(), &mh, &nh, &bounds(), &self.budget)?;
                self.search_section(&r, &mut out);
            }
            "socle" => {
                let Some(ModuleDecl::Sum { parts }) = &a.module else {
                    return Err(CliError::Validation("socle mode needs a sum of two inverse systems".into()));
                };
                let [ModuleDecl::Inverse { neg: n1, free: f1 }, ModuleDecl::Inverse { neg: n2, free: f2 }] = parts.as_slice() else {
                    return Err(CliError::Validation("socle mode needs a sum of two inverse systems".into()));
                };
                let m1 = Arc::new(self.inverse(n1, f1.as_deref())?);
                let m2 = Arc::new(self.inverse(n2, f2.as_deref())?);
                let sum: ModuleRef<F> = Arc::new(DirectSum::new(m1.clone(), m2.clone())?);
                let mh = slice_element(sum.as_ref(), &m_src, 0)?;
                let nh = slice_element(sum.as_ref(), &n_src, 0)?;
                match skew_socle_obstruction(&m1, &m2, &mh, &nh, &bounds(), &self.budget)? {
                    SocleOutcome::Structural(o) => {
                        out.sections.push(Section::new("socle obstruction").status("structural").text(&o.describe()));
                        out.outcome("socle", "structural");
                        out.status = Some(Status::Holds);
                    }
                    SocleOutcome::Search(r) => {
                        out.outcome("socle", "search");
                        self.search_section(&r, &mut out);
                    }
                }
                out.dump_module = Some(self.dumper(sum));
            }
            other => return Err(CliError::Validation(format!("args.mode `{other}` is not cover, search or socle"))),
        }
        Ok(out)
    }

    fn search_section(&self, r: &PairSearch<F::Elem>, out: &mut StepOut) {
        let (status, key) = match r {
            PairSearch::Witness(_) => ("witness", "witness"),
            PairSearch::NoneUnderBounds { .. } => ("none-under-bounds", "none-under-bounds"),
        };
        out.sections.push(Section::new("cyclic cover search").status(status).text(&r.describe()));
        out.outcome("search", key);
        if let PairSearch::Witness(w) = r {
            out.outcome("alpha", w.alpha_text.clone());
        }
    }

    fn mayer_vietoris(&self, a: &Args) -> Result<StepOut, CliError> {
        let i1 = self.polys(Self::need(&a.first, "first")?, "args.first")?;
        let i2 = self.polys(Self::need(&a.second, "second")?, "args.second")?;
        let i = a.index.unwrap_or(2);
        let rep = mayer_vietoris_check(&self.ring, &i1, &i2, i, &self.budget)?;
        let holds = rep.violations.is_empty();
        let mut sec = Section::new(format!("Mayer-Vietoris additivity for H^{i}"))
            .status(if holds { "holds" } else { "fails" })
            .line(format!("{} grades compared, {} violations", rep.rows.len(), rep.violations.len()))
            .line(format!("H^{i} and H^{} of I1 + I2 vanish on the box: {}", i + 1, rep.sum_ideal_vanishes));
        for r in rep.rows.iter().filter(|r| r.intersection + r.first + r.second > 0) {
            sec.slices.push(SliceRow {
                table: format!("H^{i}"),
                grade: grade_vec(&r.grade),
                dim: Some(r.intersection),
                stability: Stability::Exact.as_str().into(),
                detail: format!("{} = {} + {}", r.intersection, r.first, r.second),
            });
        }
        let mut out = StepOut::new();
        out.sections.push(sec);
        out.outcome("additivity", if holds { "holds" } else { "fails" });
        out.outcome("violations", rep.violations.len().to_string());
        out.outcome("sum-ideal-vanishes", rep.sum_ideal_vanishes.to_string());
        out.status = Some(if holds { Status::Holds } else { Status::Fails });
        Ok(out)
    }
}
