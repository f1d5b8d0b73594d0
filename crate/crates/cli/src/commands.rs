//! Executes `run` lines and renders their results, once for people and once
//! as `key=value` blocks for harnesses.

use std::fmt::Write as _;

use tac_core::{
    complete_resolution, compose_functors_check, cone_of_counit, cone_with_maps, dual_base_change_iso, find_homotopy,
    left_approximation, minimal_free_resolution, minimality_witness, projective_dimension, right_approximation,
    total_acyclicity_check, triangle_resolution, truncated_cone, validate_complex, BaseChange, ChainComplex, ChainMap,
    CompleteMethod, CompleteResolution, Homotopy, MinimalityVerdict, RingClass, MAX_RESOLUTION_LENGTH,
};

use crate::error::concept;
use crate::session::{
    class_text, materialize, matrix_text, same_complex, tail_text, Command, CommandKind, MapDef, Session,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A verification the command performs did not go through.
    Failed,
    /// The computation itself stopped.
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failed => "failed",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub lines: Vec<String>,
    pub fields: Vec<(String, String)>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report { command: command.to_string(), status: Status::Ok, lines: Vec::new(), fields: Vec::new() }
    }

    fn say(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn put(&mut self, k: impl Into<String>, v: impl ToString) {
        self.fields.push((k.into(), v.to_string()));
    }

    fn fail(&mut self, why: impl Into<String>) {
        let why = why.into();
        self.say(format!("FAILED: {why}"));
        if self.status == Status::Ok {
            self.status = Status::Failed;
        }
    }

    /// Value of the first field named `key`.
    pub fn field(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn human(&self) -> String {
        let mut s = format!("> {}\n", self.command);
        for l in &self.lines {
            writeln!(s, "  {l}").unwrap();
        }
        s
    }

    pub fn machine(&self) -> String {
        let mut s = format!("begin {}\nstatus={}\n", self.command, self.status.as_str());
        for (k, v) in &self.fields {
            writeln!(s, "{k}={v}").unwrap();
        }
        s.push_str("end\n");
        s
    }
}

pub fn run_command(session: &Session, cmd: &Command) -> Report {
    let mut r = Report::new(&cmd.text);
    if let Err(e) = exec(session, cmd, &mut r) {
        r.status = Status::Error;
        r.say(format!("error in {}", concept(&e)));
        r.put("error", concept(&e));
    }
    r
}

pub fn run_all(session: &Session) -> Vec<Report> {
    session.commands.iter().map(|c| run_command(session, c)).collect()
}

fn put_complex(r: &mut Report, key: &str, c: &ChainComplex, lo: i64, hi: i64) -> tac_core::Result<()> {
    let c = c.extend_to(lo, hi)?;
    let ranks: Vec<String> = (lo..=hi).map(|n| c.rank(n).to_string()).collect();
    if ranks.iter().all(|x| x == "0") {
        r.say(format!("{key}: zero complex on [{lo}, {hi}]"));
    } else {
        r.say(format!("{key}: ranks [{}] in degrees {lo}..{hi}", ranks.join(", ")));
        for n in lo + 1..=hi {
            let d = c.d(n);
            if d.rows() > 0 && d.cols() > 0 {
                r.say(format!("  d({n}) = {}", d.to_text()));
            }
        }
    }
    r.put(format!("{key}.ranks"), ranks.join(","));
    for n in lo + 1..=hi {
        r.put(format!("{key}.d.{n}"), matrix_text(&c.d(n)));
    }
    Ok(())
}

fn put_map(r: &mut Report, key: &str, f: &ChainMap, lo: i64, hi: i64) -> tac_core::Result<()> {
    for n in lo..=hi {
        let m = f.try_component(n)?;
        if m.rows() > 0 && m.cols() > 0 {
            r.say(format!("  {key}({n}) = {}", m.to_text()));
        }
        r.put(format!("{key}.{n}"), matrix_text(&m));
    }
    Ok(())
}

fn put_homotopy(r: &mut Report, key: &str, h: &Homotopy) {
    if h.is_zero() {
        r.put(key, "0");
        return;
    }
    let (lo, hi) = h.window();
    for n in lo - 1..=hi {
        let s = h.component(n);
        if !s.is_zero() {
            r.say(format!("  {key}({n}) = {}", s.to_text()));
        }
        r.put(format!("{key}.{n}"), matrix_text(s));
    }
}

fn homotopy_summary(h: &Homotopy) -> String {
    if h.is_zero() {
        return "witness 0".into();
    }
    let (lo, hi) = h.window();
    let nz: Vec<String> = (lo - 1..=hi).filter(|&n| !h.component(n).is_zero()).map(|n| n.to_string()).collect();
    format!("witness s nonzero in degrees {}", nz.join(", "))
}

fn method_text(m: CompleteMethod) -> &'static str {
    match m {
        CompleteMethod::FinitePd => "finite-pd",
        CompleteMethod::Periodic => "periodic",
        CompleteMethod::Splice => "splice",
        CompleteMethod::Tensor => "tensor",
    }
}

fn put_complete(r: &mut Report, key: &str, cr: &CompleteResolution, lo: i64, hi: i64) -> tac_core::Result<()> {
    r.put(format!("{key}.method"), method_text(cr.method));
    r.put(format!("{key}.agreement"), cr.agreement);
    r.put(format!("{key}.period"), cr.period.map_or("none".into(), |p| p.to_string()));
    if cr.is_zero() {
        r.say(format!("{key} is the zero complex (finite projective dimension)"));
        r.put(format!("{key}.zero"), true);
        return Ok(());
    }
    r.put(format!("{key}.zero"), false);
    let per = cr.period.map_or("no period".to_string(), |p| format!("period {p}"));
    r.say(format!(
        "{key}: {} method, agrees with the resolution from degree {}, {per}",
        method_text(cr.method),
        cr.agreement
    ));
    put_complex(r, key, &cr.complex, lo, hi)
}

fn bc_for(s: &Session, ring: &str) -> tac_core::Result<BaseChange> {
    s.base_change_into(ring).map_err(tac_core::Error::Precondition)
}

fn exec(s: &Session, cmd: &Command, r: &mut Report) -> tac_core::Result<()> {
    let (lo, hi) = cmd.window;
    r.put("window", format!("{lo},{hi}"));
    let cx = |n: &str| s.complex(n).expect("names are checked at parse time");
    match &cmd.kind {
        CommandKind::Check(c) => {
            let d = cx(c);
            let ring = &s.ring(&d.ring).unwrap().ring;
            r.say(format!(
                "{c} over {} ({}), tails above {} / below {}",
                ring.describe(),
                class_text(ring.class()),
                tail_text(d.complex.above()),
                tail_text(d.complex.below())
            ));
            let e = d.complex.extend_to(lo, hi)?;
            let v = validate_complex(&e);
            r.put("complex", v.valid);
            match v.failure {
                None => r.say(format!("d∘d = 0 on [{}, {}]", v.checked.0, v.checked.1)),
                Some(n) => r.fail(format!("d({}) d({n}) != 0", n - 1)),
            }
            let a = total_acyclicity_check(&d.complex, lo, hi);
            r.put("totally_acyclic", a.passed());
            match &a.failure {
                None => r.say(format!("totally acyclic on [{lo}, {hi}]: exact, and exact after Hom(-, {})", d.ring)),
                Some(f) => r.fail(format!("total acyclicity fails: {f:?}")),
            }
            put_complex(r, c, &d.complex, lo, hi)?;
        }
        CommandKind::Resolve { module, length } => {
            let m = &s.module(module).unwrap().module;
            let res = minimal_free_resolution(m, *length)?;
            let ranks: Vec<String> = (0..=*length as i64).map(|n| res.complex.rank(n).to_string()).collect();
            r.say(format!("minimal free resolution of {module}: ranks {}", ranks.join(", ")));
            r.put("ranks", ranks.join(","));
            r.put("pd", res.pd.map_or("unknown".into(), |p| p.to_string()));
            if let Some(p) = res.pd {
                r.say(format!("projective dimension {p}"));
            }
            let f = res.complex.extend_to(0, *length as i64)?;
            let minimal = (1..=*length as i64).all(|n| f.d(n).is_minimal());
            r.put("minimal", minimal);
            for n in 1..=*length as i64 {
                let d = f.d(n);
                if d.rows() > 0 && d.cols() > 0 {
                    r.say(format!("  d({n}) = {}", d.to_text()));
                }
                r.put(format!("d.{n}"), matrix_text(&d));
            }
            if !minimal {
                r.fail("a differential has a unit entry");
            }
        }
        CommandKind::CompleteRes(module) => {
            let md = s.module(module).unwrap();
            let ring = &s.ring(&md.ring).unwrap().ring;
            let cr = complete_resolution(&md.module)?;
            put_complete(r, "U", &cr, lo, hi)?;
            let a = total_acyclicity_check(&cr.complex, lo, hi);
            r.put("totally_acyclic", a.passed());
            if let Some(f) = &a.failure {
                r.fail(format!("total acyclicity fails: {f:?}"));
            } else {
                r.say(format!("totally acyclic on [{lo}, {hi}]"));
            }
            if ring.class() == RingClass::Hypersurface && !cr.is_zero() {
                match cr.period {
                    Some(p) if p <= 2 => r.say(format!("hypersurface ring: period {p} <= 2")),
                    _ => r.fail("over a hypersurface the complete resolution should have period at most 2"),
                }
            }
        }
        CommandKind::ApplyS { complex, to } => {
            let bc = bc_for(s, to)?;
            let sd = bc.apply_s(&cx(complex).complex, lo, hi)?;
            r.say(format!("S {complex} = {complex} ⊗ {to}"));
            put_complex(r, "S", &sd, lo, hi)?;
        }
        CommandKind::ApplyT(c) => {
            let d = cx(c);
            let bc = bc_for(s, &d.ring)?;
            let tc = bc.apply_t(&d.complex)?;
            let q = s.ring_name(&bc.q).unwrap_or("Q").to_string();
            r.say(format!("T {c}: complete resolution over {q} of Im d(0)"));
            put_complete(r, "T", &tc, lo, hi)?;
        }
        CommandKind::Unit { complex, to } => {
            let bc = bc_for(s, to)?;
            let eta = bc.unit(&cx(complex).complex, lo, hi)?;
            r.say(format!("unit η: {complex} -> T S {complex}"));
            put_complex(r, "TS", eta.target(), lo, hi)?;
            put_map(r, "eta", &eta, lo, hi)?;
            if let Some(n) = eta.commutation_failure() {
                r.fail(format!("η does not commute in degree {n}"));
            }
        }
        CommandKind::Counit { complex, against } => counit(s, complex, against.as_deref(), lo, hi, r)?,
        CommandKind::ApproxRight(c) => {
            let d = cx(c);
            let bc = bc_for(s, &d.ring)?;
            let eps = right_approximation(&bc, &d.complex, lo, hi)?;
            let q = s.ring_name(&bc.q).unwrap_or("Q").to_string();
            if eps.stc.is_zero() {
                let pd = projective_dimension(&bc.restricted_image(&d.complex)?, MAX_RESOLUTION_LENGTH)?;
                let pd = pd.map_or("infinite".to_string(), |p| p.to_string());
                r.say(format!("approximation 0 -> {c}"));
                r.say(format!("source is the zero complex; pd_{q}(Im ∂₀) = {pd}"));
                r.put("source", "zero");
                r.put("pd_image", pd);
            } else {
                r.say(format!("right approximation ε: S T {c} -> {c}"));
                r.put("source", "STC");
                put_complex(r, "STC", &eps.stc, lo, hi)?;
                put_map(r, "eps", &eps.map, eps.map.lo().max(lo), eps.map.hi().min(hi))?;
                if let Some(n) = eps.map.commutation_failure() {
                    r.fail(format!("ε does not commute in degree {n}"));
                }
            }
        }
        CommandKind::ApproxLeft(c) => {
            let d = cx(c);
            let bc = bc_for(s, &d.ring)?;
            let la = left_approximation(&bc, &d.complex, lo, hi)?;
            r.say(format!("left approximation {c} -> (S T {c}*)*"));
            let (mlo, mhi) = (la.map.lo().max(lo), la.map.hi().min(hi));
            put_complex(r, "target", &la.target, mlo, mhi)?;
            put_map(r, "eps_dual", &la.map, mlo, mhi)?;
            let iso = la.dual_iso.composites_are_identities();
            r.put("dual_iso", iso);
            if !iso {
                r.fail("Hom(S D, R) ≅ S Hom(D, Q) does not compose to identities");
            }
            if let Some(n) = la.map.commutation_failure() {
                r.fail(format!("the map does not commute in degree {n}"));
            }
        }
        CommandKind::Homotopic(f, g) => {
            let (fd, gd) = (s.map(f).unwrap(), s.map(g).unwrap());
            let same_ends = same_complex(fd.map.source(), gd.map.source(), lo, hi)
                && same_complex(fd.map.target(), gd.map.target(), lo, hi);
            if !same_ends {
                r.fail(format!("{f} and {g} do not share source and target"));
                return Ok(());
            }
            let fm = materialize(&fd.map, lo, hi)?;
            let gm = materialize(&gd.map, lo, hi)?.retarget(fm.source(), fm.target())?;
            match find_homotopy(&fm, &gm) {
                Some(h) => {
                    r.say(format!("homotopic, {}", homotopy_summary(&h)));
                    r.put("homotopic", true);
                    put_homotopy(r, "s", &h);
                }
                None => {
                    r.say(format!("not homotopic on [{lo}, {hi}]"));
                    r.put("homotopic", false);
                }
            }
        }
        CommandKind::Cone(f) => {
            let md = s.map(f).unwrap();
            let fm = materialize(&md.map, lo, hi)?;
            let cn = cone_with_maps(&fm)?;
            r.say(format!("cone({f}): cone_n = {}_n ⊕ {}_(n-1)", md.target, md.source));
            put_complex(r, "cone", &cn.complex, cn.complex.lo(), cn.complex.hi())?;
            if let MapDef::Counit(c) = &md.def {
                let bc = bc_for(s, &cx(c).ring)?;
                let coc = cone_of_counit(&bc, &cx(c).complex, lo, hi)?;
                r.put("compared_with", format!("shift {c} 2"));
                if !coc.attempted {
                    r.say(format!("pd_Q R = {}: no comparison with Σ² {c} is predicted", bc.pd()));
                } else if let Some(e) = &coc.equivalence {
                    let (a, b) = e.window();
                    r.say(format!("cone(ε_{c}) ≃ Σ² {c}, certified on [{a}, {b}]"));
                    r.put("equivalence", true);
                } else {
                    r.put("equivalence", false);
                    r.fail(format!("no homotopy equivalence cone(ε_{c}) -> Σ² {c} was found"));
                }
            }
        }
        CommandKind::TrCone(f) => {
            let md = s.map(f).unwrap();
            let fm = materialize(&md.map, lo.min(0), hi.max(1))?;
            let tc = truncated_cone(&fm)?;
            r.say(format!("truncated cone of {f}; shifted by -1 it resolves the kernel of H_0({f})"));
            r.put("kernel_basis", matrix_text(&tc.kernel_basis));
            r.say(format!("  kernel basis W -> cone_1 = {}", matrix_text(&tc.kernel_basis)));
            let x = tc.complex.shift(-1);
            put_complex(r, "kernel_resolution", &x, 0, hi.max(1) - 1)?;
        }
        CommandKind::Dual { complex, to } => {
            let d = cx(complex);
            put_complex(r, "dual", &d.complex.dualize(), lo, hi)?;
            if let Some(to) = to {
                let target = &s.ring(to).unwrap().ring;
                let iso = dual_base_change_iso(&d.complex.extend_to(lo, hi)?, target)?;
                let ok = iso.composites_are_identities();
                r.put("alpha_beta_identity", ok);
                if ok {
                    r.say(format!(
                        "Hom({complex} ⊗ {to}, {to}) ≅ Hom({complex}, {}) ⊗ {to}: α∘β = id, β∘α = id",
                        d.ring
                    ));
                } else {
                    r.fail("α and β are not mutually inverse");
                }
            }
        }
        CommandKind::Shift(c, k) => {
            r.say(format!("Σ^{k} {c}: degree n holds {c}_(n-{k}), differential times (-1)^{k}"));
            put_complex(r, "shift", &cx(c).complex.shift(*k), lo, hi)?;
        }
        CommandKind::Minimality(e, f) => {
            let em = materialize(&s.map(e).unwrap().map, lo, hi)?;
            let fm = materialize(&s.map(f).unwrap().map, lo, hi)?.retarget(em.source(), em.source())?;
            match minimality_witness(&em, &fm)? {
                MinimalityVerdict::Witness { factorization, degree } => {
                    r.say(format!("not right minimal: {e}∘{f} ~ {e} and {f} is not an equivalence"));
                    r.say(format!("  {f}({degree}) is singular modulo the maximal ideal"));
                    r.put("verdict", "witness");
                    r.put("degree", degree);
                    put_homotopy(r, "s", &factorization);
                }
                MinimalityVerdict::Equivalence(_) => {
                    r.say(format!("{f} is a homotopy equivalence; it witnesses nothing"));
                    r.put("verdict", "equivalence");
                }
                MinimalityVerdict::NotFactoring => {
                    r.say(format!("{e}∘{f} is not homotopic to {e}"));
                    r.put("verdict", "not-factoring");
                }
                MinimalityVerdict::Undecided => {
                    r.put("verdict", "undecided");
                    r.fail("neither an inverse nor a non-invertibility certificate was found");
                }
            }
        }
        CommandKind::TriangleRes { complex, depth } => {
            let d = cx(complex);
            let bc = bc_for(s, &d.ring)?;
            let tr = triangle_resolution(&bc, &d.complex, *depth, lo, hi)?;
            r.say(format!("tower B_{depth} -> ... -> B_0 -> {complex}, checked on [{lo}, {hi}]"));
            for (i, level) in tr.levels.iter().enumerate() {
                let b = level.complex().extend_to(lo, hi)?;
                let ranks: Vec<String> = (lo..=hi).map(|n| b.rank(n).to_string()).collect();
                r.put(format!("B{i}.ranks"), ranks.join(","));
                r.say(format!("B_{i}: ranks [{}]", ranks.join(", ")));
            }
            for (i, h) in tr.null_homotopies.iter().enumerate() {
                r.put(format!("null_homotopy.{i}"), h.is_some());
                if h.is_none() {
                    r.fail(format!("B_{} -> B_{i} -> B_{} is not shown null-homotopic", i + 1, i as i64 - 1));
                }
            }
            for (i, e) in tr.equivalences.iter().enumerate() {
                r.put(format!("equivalence.{i}"), e.is_some());
                match (e, bc.pd()) {
                    (Some(_), _) => r.say(format!("B_{i} ≃ Σ^-{i} S T {complex}, certified")),
                    (None, 1) => r.fail(format!("no equivalence B_{i} ≃ Σ^-{i} S T {complex} was found")),
                    (None, _) => {}
                }
            }
        }
        CommandKind::TriangleIdentities(c) => {
            let d = cx(c);
            let bc = bc_for(s, &d.ring)?;
            let ti = bc.triangle_identities(&d.complex, lo, hi)?;
            for (label, key, h) in
                [("T ε_C ∘ η_TC ~ Id_TC", "first", &ti.first), ("ε_SD ∘ S η_D ~ Id_SD (D = T C)", "second", &ti.second)]
            {
                r.put(key, h.is_some());
                match h {
                    Some(h) => {
                        r.say(format!("{label}: {}", homotopy_summary(h)));
                        put_homotopy(r, &format!("{key}.s"), h);
                    }
                    None => r.fail(format!("{label}: no homotopy found")),
                }
            }
        }
        CommandKind::ComposeCheck(t) => {
            let td = s.tower(t).unwrap();
            let ring = |n: &str| s.ring(n).unwrap().ring.clone();
            let rep = compose_functors_check(
                &ring(&td.rings[0]),
                &ring(&td.rings[1]),
                &ring(&td.rings[2]),
                &cx(&td.s_complex).complex,
                &cx(&td.t_complex).complex,
                lo,
                hi,
            )?;
            let [a, b, c] = &td.rings;
            r.put("s_equal", rep.s_equal);
            r.put("t_equivalence", rep.t_equivalence.is_some());
            if rep.s_equal {
                r.say(format!("S({a}->{c}) {} = S({b}->{c}) S({a}->{b}) {}, bit-exact", td.s_complex, td.s_complex));
            } else {
                r.fail("S-composites differ");
            }
            match &rep.t_equivalence {
                Some(e) => {
                    let (x, y) = e.window();
                    r.say(format!(
                        "T({a}->{c}) {} ≃ T({a}->{b}) T({b}->{c}) {}, certified on [{x}, {y}]",
                        td.t_complex, td.t_complex
                    ));
                }
                None => r.fail("no homotopy equivalence between the T-composites was found"),
            }
        }
    }
    Ok(())
}

fn counit(s: &Session, c: &str, against: Option<&str>, lo: i64, hi: i64, r: &mut Report) -> tac_core::Result<()> {
    let d = s.complex(c).unwrap();
    let bc = bc_for(s, &d.ring)?;
    let eps = bc.counit(&d.complex, lo, hi)?;
    r.say(format!("counit ε_{c}: S T {c} -> {c}"));
    put_complex(r, "STC", &eps.stc, lo, hi)?;
    let (mlo, mhi) = (eps.map.lo().max(lo), eps.map.hi().min(hi));
    put_map(r, "eps", &eps.map, mlo, mhi)?;
    if let Some(n) = eps.map.commutation_failure() {
        r.fail(format!("ε does not commute in degree {n}"));
    }
    let Some(g) = against else { return Ok(()) };
    let gd = s.map(g).unwrap();
    let (glo, ghi) = gd.map.window();
    if !same_complex(gd.map.target(), &d.complex, glo - 1, ghi + 1) {
        r.fail(format!("{g} does not end at {c}"));
        return Ok(());
    }
    if !same_complex(gd.map.source(), &eps.stc, glo - 1, ghi + 1) {
        r.fail(format!("the source of {g} is not S T {c}"));
        return Ok(());
    }
    let src = eps.map.source();
    let tgt = eps.map.target();
    let lifted = materialize(&gd.map.retarget(&src.extend_to(glo, ghi)?, &tgt.extend_to(glo, ghi)?)?, mlo, mhi)?;
    let lifted = lifted.retarget(src, tgt)?;
    match find_homotopy(&eps.map, &lifted) {
        Some(h) => {
            r.say(format!("certified: ε_{c} ~ {g} as chain maps on [{mlo}, {mhi}], {}", homotopy_summary(&h)));
            r.put("certified", true);
            put_homotopy(r, "s", &h);
        }
        None => {
            r.put("certified", false);
            r.fail(format!("ε_{c} and {g} are not shown homotopic on [{mlo}, {mhi}]"));
        }
    }
    Ok(())
}
