//! Plain-text rendering of reports. Everything here is deterministic: no
//! timings, no thread counts.

use std::fmt::Write as _;

use cocycle_core::cocycle::CocycleReport;
use cocycle_core::rigidity::{CohomologyReport, PhiReport, SweepSummary};
use cocycle_core::{
    CayleyExplorer, Configuration, EndsReport, LocalCocycle, ObstructionDetails,
    ObstructionWitness, Result, RigidityResult,
};

pub struct Out {
    buf: String,
    pub verbose: u8,
}

impl Out {
    pub fn new(verbose: u8) -> Self {
        Out {
            buf: String::new(),
            verbose,
        }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.buf.push_str(s.as_ref());
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

fn sampling(exhaustive: bool, seed: u64) -> String {
    if exhaustive {
        format!("exhaustive, seed {seed}")
    } else {
        format!("sampled, seed {seed}")
    }
}

pub fn header(out: &mut Out, c: &LocalCocycle) {
    out.line(format!(
        "cocycle: {} -> {}, alphabet {{{}}} (zero {}), window L={}",
        c.source().spec(),
        c.target().spec(),
        c.alphabet().names().join(","),
        c.alphabet().name(c.alphabet().zero()),
        c.window()
    ));
}

pub fn ends_row(out: &mut Out, rep: &EndsReport) {
    out.line(format!(
        "  r={:<3} cutoff={:<3} unbounded={:<4} bounded={:<4} N={}{}",
        rep.radius,
        rep.cutoff,
        rep.unbounded_components,
        rep.bounded_components,
        rep.n_of_r,
        if rep.caveat {
            "  (caveat: not stabilized)"
        } else {
            ""
        }
    ));
}

pub fn configuration(ex: &CayleyExplorer, c: &LocalCocycle, x: &Configuration) -> Result<String> {
    let mut sites = Vec::new();
    for (g, &s) in x.overrides() {
        let (_, i) = ex.locate(g)?;
        sites.push((
            i,
            format!("{}: {}", c.source().label(g), c.alphabet().name(s)),
        ));
    }
    sites.sort();
    let sites: Vec<String> = sites.into_iter().map(|(_, s)| s).collect();
    Ok(format!(
        "{{{}}} default {}",
        sites.join(", "),
        c.alphabet().name(x.default_symbol())
    ))
}

pub fn identity(out: &mut Out, c: &LocalCocycle, rep: &CocycleReport) {
    let g = c.source();
    let h = c.target();
    out.line(format!(
        "cocycle identity on B({r}) x B({r}): {} configurations ({}), {} pairs checked",
        rep.configurations,
        sampling(rep.exhaustive, rep.seed),
        rep.checked_pairs,
        r = rep.radius
    ));
    out.line(format!("failures: {}", rep.failure_count));
    let names = g.generator_names();
    let positive = c.explorer().positive_generators();
    for (i, w) in rep.witnesses.iter().enumerate() {
        out.line(format!(
            "witness {}: g={} h={}",
            i + 1,
            g.label(&w.g),
            g.label(&w.h)
        ));
        out.line(format!("  c(gh,x)       = {}", h.label(&w.left)));
        out.line(format!("  c(g,hx)c(h,x) = {}", h.label(&w.right)));
        out.line(format!(
            "  x on B({}): {}",
            w.window_radius,
            c.alphabet().pattern_string(&w.window)
        ));
        let hits: Vec<String> = w
            .rule_hits
            .iter()
            .map(|hit| {
                format!(
                    "{}@{}",
                    names[positive[hit.generator]],
                    c.alphabet().pattern_string(&hit.pattern)
                )
            })
            .collect();
        out.line(format!("  rule entries read: {}", hits.join(" ")));
    }
    if rep.failure_count > rep.witnesses.len() as u64 {
        out.line(format!(
            "({} further failures not shown)",
            rep.failure_count - rep.witnesses.len() as u64
        ));
    }
}

pub fn phi_report(out: &mut Out, c: &LocalCocycle, rep: &PhiReport) {
    let (g, h) = (c.source(), c.target());
    out.line(format!(
        "phi homomorphism check on B({}): {} pairs, {} failures",
        rep.radius,
        rep.checked,
        rep.failures.len()
    ));
    for (a, b, left, right) in &rep.failures {
        out.line(format!(
            "  phi({}*{}) = {} but phi({})phi({}) = {}",
            g.label(a),
            g.label(b),
            h.label(left),
            g.label(a),
            g.label(b),
            h.label(right)
        ));
    }
}

fn sweep_line(name: &str, unit: &str, s: &SweepSummary) -> String {
    format!(
        "{name}: {} {unit}, {} comparisons, seed {}: {}",
        s.configurations,
        s.comparisons,
        s.seed,
        if s.witness.is_some() { "FAILED" } else { "ok" }
    )
}

pub fn cohomology(out: &mut Out, c: &LocalCocycle, rep: &CohomologyReport) {
    let (g, h) = (c.source(), c.target());
    out.line(format!(
        "cohomology check c(g,x) = b(gx)phi(g)b(x)^-1 for g in B({}): {} configurations ({}), {} checks, {} failures",
        rep.radius,
        rep.configurations,
        sampling(rep.exhaustive, rep.seed),
        rep.checked,
        rep.failure_count
    ));
    for (i, f) in rep.failures.iter().enumerate() {
        out.line(format!(
            "  failure {}: g={} x on B({}) = {} (default {}): c(g,x) = {}, b(gx)phi(g)b(x)^-1 = {}",
            i + 1,
            g.label(&f.g),
            f.window_radius,
            c.alphabet().pattern_string(&f.window),
            c.alphabet().name(f.default),
            h.label(&f.left),
            h.label(&f.right)
        ));
    }
}

pub fn obstruction(out: &mut Out, c: &LocalCocycle, w: &ObstructionWitness) -> Result<()> {
    let ex = c.explorer();
    let (g, h) = (c.source(), c.target());
    out.line(format!("obstruction: {}", w.kind));
    out.line(format!("  x = {}", configuration(ex, c, &w.x)?));
    match &w.details {
        ObstructionDetails::Conflict {
            first,
            second,
            first_value,
            second_value,
            avoiding_path,
        } => {
            out.line(format!(
                "  via g={}: c(g,x)^-1 phi(g) = {}",
                g.label(first),
                h.label(first_value)
            ));
            out.line(format!(
                "  via g={}: c(g,x)^-1 phi(g) = {}",
                g.label(second),
                h.label(second_value)
            ));
            out.line(format!(
                "  path between them avoiding B(||x||+L): {}",
                if *avoiding_path { "found" } else { "none" }
            ));
        }
        ObstructionDetails::Locality {
            y,
            x_value,
            y_value,
        } => {
            out.line(format!("  y = {}", configuration(ex, c, y)?));
            out.line(format!(
                "  b(x) = {}, b(y) = {}",
                h.label(x_value),
                h.label(y_value)
            ));
        }
        ObstructionDetails::Disconnected {
            from,
            to,
            radius,
            cutoff,
        } => {
            out.line(format!(
                "  no path from {} to {} avoids B({radius}) inside B({cutoff})",
                g.label(from),
                g.label(to)
            ));
        }
    }
    Ok(())
}

pub fn rigidity(out: &mut Out, c: &LocalCocycle, r: &RigidityResult) -> Result<()> {
    let (g, h) = (c.source(), c.target());
    let ns: Vec<String> = r
        .n_values
        .iter()
        .map(|n| format!("N({})={}{}", n.r, n.n, if n.caveat { "*" } else { "" }))
        .collect();
    out.line(format!("N values: {}", ns.join(" ")));
    if r.n_values.iter().any(|n| n.caveat) {
        out.line("  (* caveat: component count not stabilized at the cutoff)");
    }
    if let Some(n) = r.n_values.iter().find(|n| n.unbounded != 1) {
        out.line(format!(
            "warning: {} unbounded components at r={}; the group does not look one-ended",
            n.unbounded, n.r
        ));
    }
    out.line(format!(
        "phi on B({}): {} entries",
        r.phi.radius,
        r.phi.values.len()
    ));
    let ex = c.explorer();
    let ball = ex.ensure(r.phi.radius)?;
    let shown = if out.verbose > 0 {
        r.phi.values.len()
    } else {
        ball.ball_len(1)
    };
    for (i, v) in r.phi.values.iter().enumerate().take(shown).skip(1) {
        out.line(format!(
            "  phi({}) = {}",
            g.label(ball.element(i)),
            h.label(v)
        ));
    }
    phi_report(out, c, &r.phi_report);
    out.line(sweep_line(
        "independence",
        "configurations",
        &r.independence,
    ));
    let t = &r.b_table;
    if t.complete {
        out.line(format!(
            "transfer table on B({}) patterns: {} entries (complete)",
            t.radius,
            t.values.len()
        ));
    } else {
        out.line(format!(
            "transfer table on B({}) patterns: {} stored entries supported in B({}), others computed on lookup",
            t.radius,
            t.values.len(),
            t.support_radius
        ));
    }
    let b_shown = if out.verbose > 0 {
        t.values.len()
    } else {
        t.values.len().min(4)
    };
    for (i, v) in t.values.iter().enumerate().take(b_shown) {
        out.line(format!(
            "  b({}) = {}",
            c.alphabet().pattern_string(&t.pattern(c.alphabet(), i)),
            h.label(v)
        ));
    }
    out.line(sweep_line("locality", "pairs", &r.locality));
    cohomology(out, c, &r.verification);
    if let Some(w) = &r.obstruction {
        obstruction(out, c, w)?;
    }
    Ok(())
}

pub fn verdict(out: &mut Out, ok: bool) {
    out.line(if ok {
        "result: verified"
    } else {
        "result: FAILED"
    });
}

pub fn sphere_sizes(ex: &CayleyExplorer, r_max: u32) -> Result<String> {
    let ball = ex.ensure(r_max)?;
    let mut s = String::new();
    for r in 0..=r_max {
        let _ = write!(
            s,
            "{}{}",
            if r == 0 { "" } else { " " },
            ball.sphere_range(r).len()
        );
    }
    Ok(s)
}
