//! Exact incremental elimination for affine parameter equations.

use std::collections::BTreeMap;

use rug::Rational;

use crate::core_types::Affine;

fn replace(a: &Affine, x: &str, by: &Affine) -> Affine {
    let c = a.coefficient(x);
    if c == 0 {
        return a.clone();
    }
    a.sub(&Affine::symbol(x).scale(&c)).add(&by.scale(&c))
}

fn set(used: &mut (Vec<bool>, Vec<bool>), upper: bool, j: usize, v: bool) {
    if upper {
        used.0[j] = v;
    } else {
        used.1[j] = v;
    }
}

/// Solved symbols, each expressed through the still-free ones.
#[derive(Clone, Default)]
pub(super) struct Solver {
    rows: Vec<(String, Affine)>,
}

impl Solver {
    /// Adds `form = value`; false if inconsistent with earlier equations.
    fn add(&mut self, form: &Affine, value: &Rational) -> bool {
        let mut e = form.add_const(&Rational::from(-value));
        for (x, by) in &self.rows {
            e = replace(&e, x, by);
        }
        let Some((x, c)) = e.terms().next().map(|(x, c)| (x.to_string(), c.clone())) else {
            return *e.constant_term() == 0;
        };
        // x = -(e - c x) / c
        let rest = e.sub(&Affine::symbol(&x).scale(&c));
        let by = rest.scale(&Rational::from(-Rational::from(1) / &c));
        for row in &mut self.rows {
            row.1 = replace(&row.1, &x, &by);
        }
        self.rows.push((x, by));
        true
    }

    fn solution(&self) -> BTreeMap<String, Rational> {
        self.rows.iter().filter_map(|(x, by)| by.as_rational().map(|q| (x.clone(), q.clone()))).collect()
    }

    /// Every consistent pairing of `forms[..split]` with `upper` and of
    /// `forms[split..]` with `lower`, as solved bindings.
    pub(super) fn search(
        forms: &[&Affine],
        split: usize,
        upper: &[Rational],
        lower: &[Rational],
        out: &mut Vec<BTreeMap<String, Rational>>,
    ) {
        let mut used = (vec![false; upper.len()], vec![false; lower.len()]);
        Solver::default().step(forms, split, upper, lower, 0, &mut used, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn step(
        &self,
        forms: &[&Affine],
        split: usize,
        upper: &[Rational],
        lower: &[Rational],
        i: usize,
        used: &mut (Vec<bool>, Vec<bool>),
        out: &mut Vec<BTreeMap<String, Rational>>,
    ) {
        if i == forms.len() {
            let sol = self.solution();
            if !out.contains(&sol) {
                out.push(sol);
            }
            return;
        }
        let values = if i < split { upper } else { lower };
        let mut tried: Vec<&Rational> = Vec::new();
        for j in 0..values.len() {
            let taken = if i < split { used.0[j] } else { used.1[j] };
            if taken || tried.contains(&&values[j]) {
                continue;
            }
            tried.push(&values[j]);
            let mut next = self.clone();
            if !next.add(forms[i], &values[j]) {
                continue;
            }
            set(used, i < split, j, true);
            next.step(forms, split, upper, lower, i + 1, used, out);
            set(used, i < split, j, false);
        }
    }
}
