//! Plain-text reports with stable field order.
//!
//! Each report carries human-readable lines and the same data as ordered
//! `key=value` records for machine consumption.

use num_bigint::BigInt;

use crate::bisection::Bisection;
use crate::error::Result;
use crate::graph::{PropertyReport, Truth};
use crate::homology::{self, AbGroup, Homology, IndexValue};
use crate::matrix::MatrixPair;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<String>,
    pub fields: Vec<(String, String)>,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn field(&mut self, k: &str, v: impl ToString) {
        self.fields.push((k.to_string(), v.to_string()));
    }

    fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
        self.fields.extend(other.fields);
    }

    pub fn render(&self, machine: bool) -> String {
        let mut out = String::new();
        if machine {
            for (k, v) in &self.fields {
                out.push_str(&format!("{k}={v}\n"));
            }
        } else {
            for l in &self.lines {
                out.push_str(l);
                out.push('\n');
            }
        }
        out
    }
}

fn vertices(vs: &[usize]) -> String {
    let v: Vec<String> = vs.iter().map(|v| (v + 1).to_string()).collect();
    format!("[{}]", v.join(" "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn properties(pair: &MatrixPair, depth: usize) -> Report {
    let p = PropertyReport::compute(pair, depth);
    let mut r = Report::default();
    let s = &p.structural;
    for (k, v) in [
        ("essential", s.essential),
        ("irreducible", s.irreducible),
        ("condition_l", s.condition_l),
        ("cofinal", s.cofinal),
        ("pseudo_free", p.action.pseudo_free),
        ("contracting", p.action.contracting),
    ] {
        r.line(format!("{k}: {}", yes_no(v)));
        r.field(k, yes_no(v));
    }
    r.line(format!("b_sinks: {}", vertices(&p.action.b_sinks)));
    r.field("b_sinks", vertices(&p.action.b_sinks));
    r.line(format!("b_regular: {}", vertices(&p.action.b_regular)));
    r.field("b_regular", vertices(&p.action.b_regular));
    r.line(format!("r_b: {}", p.action.r_b));
    r.field("r_b", p.action.r_b);
    let radius = p.action.r.map_or("none".to_string(), |x| x.to_string());
    r.line(format!("nucleus_radius: {radius}"));
    r.field("nucleus_radius", radius);
    for (k, v) in [
        ("hausdorff", p.ah.hausdorff),
        ("effective", p.ah.effective),
        ("minimal", p.ah.minimal),
        ("purely_infinite", p.ah.purely_infinite),
        ("ah_criteria", p.ah.ah_criteria),
    ] {
        r.line(format!("{k}: {v}"));
        r.field(k, v);
    }
    r
}

pub fn homology(pair: &MatrixPair) -> Report {
    let h = homology::homology_groups(pair);
    homology_of(&h)
}

fn homology_of(h: &Homology) -> Report {
    let mut r = Report::default();
    let h2 = h.h2.as_ref().map_or("requires pseudo-freeness".to_string(), AbGroup::to_string);
    r.line(format!("H0 = {}, H1 = {}, H2 = {}", h.h0, h.h1, h2));
    r.field("H0", &h.h0);
    r.field("H1", &h.h1);
    r.field("H2", &h2);
    if let Some((even, odd)) = h.hk_sums() {
        r.line("Hn = 0 for n >= 3");
        r.line(format!("HK sums (reported, not independently verified): H0 (+) H2 = {even}, H1 = {odd}"));
        r.field("Hn_ge_3", "0");
        r.field("HK_even", even);
        r.field("HK_odd", odd);
    }
    r
}

fn order_text(g: &AbGroup) -> String {
    g.order().map_or("infinite".to_string(), |o: BigInt| o.to_string())
}

/// Properties, homology and the data of the AH sequence
/// `H₀ ⊗ Z/2 → ⟦𝒢⟧_ab → H₁ → 0`.
pub fn ah(pair: &MatrixPair, depth: usize) -> Report {
    let p = PropertyReport::compute(pair, depth);
    let h = homology::homology_groups(pair);
    let mut r = properties(pair, depth);
    r.extend(homology_of(&h));
    let h0_mod2 = h.h0.mod2_order();
    r.line(format!("|H0 (x) Z/2| = {h0_mod2}"));
    r.field("H0_tensor_Z2_order", &h0_mod2);
    r.line(format!("|H1| = {}", order_text(&h.h1)));
    r.field("H1_order", order_text(&h.h1));
    let exact = p.ah.ah_criteria;
    let statement = match exact {
        Truth::Yes => "AH criteria hold: H0 (x) Z/2 -> [[G]]_ab -> H1 -> 0 is exact",
        Truth::No => "AH criteria fail: exactness of the AH sequence is not asserted",
        Truth::Unknown => "AH criteria undecided at this depth: exactness is not asserted",
    };
    r.line(statement);
    r.field("ah_exact", exact);
    if p.ah.purely_infinite.is_yes() {
        r.line("purely infinite: the index map [[G]] -> H1 is surjective");
        r.field("index_surjective", "yes");
    }
    r
}

pub fn index_value(v: &IndexValue) -> Report {
    let mut r = Report::default();
    let verdict = if v.is_zero() { "zero" } else { "nonzero" };
    r.line(format!("{v} — {verdict}"));
    let show = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    r.field("ker", format!("[{}]", show(&v.ker)));
    r.field("coker", format!("[{}]", show(&v.coker)));
    r.field("is_zero", yes_no(v.is_zero()));
    r
}

pub fn index(pair: &MatrixPair, u: &Bisection) -> Result<Report> {
    Ok(index_value(&homology::index(pair, u)?))
}
