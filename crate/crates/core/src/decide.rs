//! Inclusion decisions between two spaces, with a certificate listing every
//! hypothesis, relation and witness verdict that led to the conclusion.

use crate::config::Horizons;
use crate::error::{Error, Result};
use crate::grammar::SpaceSpec;
use crate::spaces::{membership_verdict, Profile, TestFunction};
use crate::systems::{check_i, check_l, check_m, check_wm, system_relation_functions, system_relation_sequences};
use crate::verdict::{Status, Verdict};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conclusion {
    Included,
    NotIncluded,
    Inconclusive,
}

impl Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Conclusion::Included => "included",
            Conclusion::NotIncluded => "not-included",
            Conclusion::Inconclusive => "inconclusive",
        }
    }

    /// 0 included, 1 not included, 3 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Conclusion::Included => 0,
            Conclusion::NotIncluded => 1,
            Conclusion::Inconclusive => 3,
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One verdict row of a certificate. `check` names what was tested and
/// `subject` the spec it was tested on, so every constant has a source.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateRow {
    pub section: &'static str,
    pub check: String,
    pub subject: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionCertificate {
    pub space_a: String,
    pub space_b: String,
    pub hypotheses: Vec<CertificateRow>,
    /// Membership of the first witness that lands in space A.
    pub nontriviality: CertificateRow,
    pub relations: Vec<CertificateRow>,
    /// Shipped witnesses in A and in B (consistency with an inclusion).
    pub witnesses: Vec<CertificateRow>,
    pub conclusion: Conclusion,
    pub reason: String,
}

impl DecisionCertificate {
    pub fn rows(&self) -> impl Iterator<Item = &CertificateRow> {
        self.hypotheses.iter().chain(std::iter::once(&self.nontriviality)).chain(&self.relations).chain(&self.witnesses)
    }
}

/// Gaussian widths tried as nontriviality witnesses, in order.
pub const WITNESS_WIDTHS: [f64; 3] = [1.0, 0.5, 2.0];

fn witness(dim: usize, a: f64) -> Result<TestFunction> {
    let g = Profile::gaussian(a)?;
    TestFunction::new(vec![g; dim], format!("gaussian(a={a})"))
}

fn row(section: &'static str, check: &str, subject: String, verdict: Verdict) -> CertificateRow {
    CertificateRow { section, check: check.to_string(), subject, verdict }
}

/// Runs the hypothesis checks on the systems of `a` and `b`, the nontriviality
/// witness in `a`, and the two relations `M [⊆] N`, `W [⊆] V`.
pub fn decide_inclusion(a: &SpaceSpec, b: &SpaceSpec, hz: &Horizons) -> Result<DecisionCertificate> {
    if a.kind != b.kind {
        return Err(Error::InvalidInput(format!("kinds differ: {} vs {}", a.kind, b.kind)));
    }
    if a.model != b.model {
        return Err(Error::InvalidInput("the two spaces use different models".into()));
    }
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    let kind = a.kind;
    let (m, w) = (&a.seq, &a.fun);
    let (n, v) = (&b.seq, &b.fun);
    let log_convex = if m.is_log_convex(hz) {
        Verdict::witnessed()
    } else {
        Verdict::inconclusive().with_note("log-convexity not confirmed at the horizon")
    };
    let hypotheses = vec![
        row("hypothesis", "log-convex", m.spec_string(), log_convex),
        row("hypothesis", "[L]", m.spec_string(), check_l(m, kind, hz)?),
        row("hypothesis", "[I]", m.spec_string(), check_i(m, kind, hz)?),
        row("hypothesis", "[M]", w.spec_string(), check_m(w, kind, hz)?),
        row("hypothesis", "[wM]", v.spec_string(), check_wm(v, kind, hz)?),
    ];

    let model_a = a.model()?;
    let model_b = b.model()?;
    let mut nontriviality = None;
    let mut witnesses = Vec::new();
    for &width in &WITNESS_WIDTHS {
        let f = witness(a.dim, width)?;
        let in_a = membership_verdict(&f, m, w, kind, &model_a, hz)?;
        let found = in_a.is_witnessed();
        let r = row("witness", &format!("{} in A", f.label()), a.to_string(), in_a);
        if found {
            nontriviality = Some(CertificateRow { section: "nontriviality", ..r.clone() });
            let in_b = membership_verdict(&f, n, v, kind, &model_b, hz)?;
            witnesses.push(r);
            witnesses.push(row("witness", &format!("{} in B", f.label()), b.to_string(), in_b));
            break;
        }
        witnesses.push(r);
    }
    let nontriviality = nontriviality.unwrap_or_else(|| {
        row(
            "nontriviality",
            "gaussian family in A",
            a.to_string(),
            Verdict::inconclusive().with_note("no shipped witness attains a witnessed membership"),
        )
    });

    let relations = vec![
        row("relation", "M [⊆] N", format!("{} vs {}", m.spec_string(), n.spec_string()), system_relation_sequences(m, n, kind, hz)?),
        row("relation", "W [⊆] V", format!("{} vs {}", w.spec_string(), v.spec_string()), system_relation_functions(w, v, kind, hz)?),
    ];

    let (conclusion, reason) = conclude(&hypotheses, &nontriviality, &relations, &witnesses);
    Ok(DecisionCertificate {
        space_a: a.to_string(),
        space_b: b.to_string(),
        hypotheses,
        nontriviality,
        relations,
        witnesses,
        conclusion,
        reason,
    })
}

/// Included needs every hypothesis and both relations witnessed; not
/// included needs every hypothesis, nontriviality and a falsified relation.
/// A shipped witness in A that is falsified in B blocks an inclusion.
fn conclude(
    hypotheses: &[CertificateRow],
    nontriviality: &CertificateRow,
    relations: &[CertificateRow],
    witnesses: &[CertificateRow],
) -> (Conclusion, String) {
    if let Some(h) = hypotheses.iter().find(|h| h.verdict.status != Status::Witnessed) {
        return (Conclusion::Inconclusive, format!("hypothesis {} on {} is {}", h.check, h.subject, h.verdict.status));
    }
    if relations.iter().all(|r| r.verdict.is_witnessed()) {
        if let Some(w) = witnesses.windows(2).find(|p| p[0].verdict.is_witnessed() && p[1].verdict.is_falsified()) {
            return (Conclusion::Inconclusive, format!("relations witnessed but {} is falsified", w[1].check));
        }
        return (Conclusion::Included, "both relations witnessed".into());
    }
    if let Some(r) = relations.iter().find(|r| r.verdict.is_falsified()) {
        if nontriviality.verdict.is_witnessed() {
            return (Conclusion::NotIncluded, format!("relation {} falsified", r.check));
        }
        return (Conclusion::Inconclusive, format!("relation {} falsified but nontriviality not witnessed", r.check));
    }
    let open: Vec<&str> = relations.iter().filter(|r| !r.verdict.is_witnessed()).map(|r| r.check.as_str()).collect();
    (Conclusion::Inconclusive, format!("relation {} inconclusive", open.join(", ")))
}
