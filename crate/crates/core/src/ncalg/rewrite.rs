//! Degree-truncated Bergman completion and memoized normal forms.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::Rng;

use super::poly::{cmp_words, word_degree, NCPoly, Word};
use super::NcError;
use crate::field::Field;
use crate::report::CheckReport;

/// Rewriting steps allowed in one normal-form computation before the
/// system is declared non-confluent.
pub const STEP_BUDGET: u64 = 200_000_000;

/// A rewriting system `lead -> tail` where every tail is a combination of
/// words smaller than its lead.
#[derive(Debug)]
pub struct RewriteSystem<F: Field> {
    degrees: Vec<u32>,
    rules: HashMap<Word, NCPoly<F>>,
    max_lead: usize,
    bound: u32,
    complete: bool,
    collapsed: bool,
    cache: Mutex<HashMap<(u8, Word), NCPoly<F>>>,
    normal_words: Mutex<Vec<Vec<Word>>>,
}

impl<F: Field> Clone for RewriteSystem<F> {
    fn clone(&self) -> Self {
        Self {
            degrees: self.degrees.clone(),
            rules: self.rules.clone(),
            max_lead: self.max_lead,
            bound: self.bound,
            complete: self.complete,
            collapsed: self.collapsed,
            cache: Mutex::new(HashMap::new()),
            normal_words: Mutex::new(Vec::new()),
        }
    }
}

/// Work polynomial keyed so that the last entry is the largest word.
type Work<F> = BTreeMap<(u32, Word), F>;

fn work_add<F: Field>(work: &mut Work<F>, key: (u32, Word), c: &F) {
    if c.is_zero() {
        return;
    }
    match work.get_mut(&key) {
        Some(e) => {
            *e = e.add(c);
            if e.is_zero() {
                work.remove(&key);
            }
        }
        None => {
            work.insert(key, c.clone());
        }
    }
}

struct Builder<'a, F: Field> {
    degrees: &'a [u32],
    rules: HashMap<Word, NCPoly<F>>,
    max_lead: usize,
}

impl<F: Field> Builder<'_, F> {
    fn find_lead(&self, w: &[u8]) -> Option<(usize, usize)> {
        if self.rules.contains_key(&Word::new()) {
            return Some((0, 0));
        }
        for start in 0..w.len() {
            for len in 1..=self.max_lead.min(w.len() - start) {
                if self.rules.contains_key(&w[start..start + len]) {
                    return Some((start, len));
                }
            }
        }
        None
    }

    fn reduce(&self, p: &NCPoly<F>) -> NCPoly<F> {
        let mut work: Work<F> = p
            .terms()
            .iter()
            .map(|(w, c)| ((word_degree(w, self.degrees), w.clone()), c.clone()))
            .collect();
        let mut out = NCPoly::zero();
        while let Some(((_, w), c)) = work.pop_last() {
            match self.find_lead(&w) {
                None => out.add_term(w, &c),
                Some((s, l)) => {
                    let tail = &self.rules[&w[s..s + l]];
                    for (u, x) in tail.terms() {
                        let mut nw = w[..s].to_vec();
                        nw.extend_from_slice(u);
                        nw.extend_from_slice(&w[s + l..]);
                        work_add(&mut work, (word_degree(&nw, self.degrees), nw), &c.mul(x));
                    }
                }
            }
        }
        out
    }
}

/// S-polynomials of proper overlaps `u = x s`, `v = s y` with total degree
/// at most `bound`; also reports whether any overlap exceeded the bound.
fn overlaps<F: Field>(
    u: &Word,
    tu: &NCPoly<F>,
    v: &Word,
    tv: &NCPoly<F>,
    degrees: &[u32],
    bound: u32,
) -> (Vec<NCPoly<F>>, bool) {
    let mut out = Vec::new();
    let mut skipped = false;
    for k in 1..u.len().min(v.len()) {
        if u[u.len() - k..] != v[..k] {
            continue;
        }
        let mut w = u.clone();
        w.extend_from_slice(&v[k..]);
        if word_degree(&w, degrees) > bound {
            skipped = true;
            continue;
        }
        let right = NCPoly::word(v[k..].to_vec());
        let left = NCPoly::word(u[..u.len() - k].to_vec());
        out.push(tu.mul(&right).sub(&left.mul(tv)));
    }
    (out, skipped)
}

impl<F: Field> RewriteSystem<F> {
    /// Complete `relations` into a rewriting system confluent on all words
    /// of weighted degree at most `bound`.
    pub fn complete(degrees: &[u32], relations: &[NCPoly<F>], bound: u32) -> Result<Self, NcError> {
        let mut b = Builder {
            degrees,
            rules: HashMap::new(),
            max_lead: 0,
        };
        let mut skipped = false;
        let mut queue: BTreeMap<u32, Vec<NCPoly<F>>> = BTreeMap::new();
        for r in relations {
            match r.degree(degrees) {
                None => {}
                Some(d) if d > bound => skipped = true,
                Some(d) => queue.entry(d).or_default().push(r.clone()),
            }
        }
        let mut steps: u64 = 0;
        while let Some(mut entry) = queue.first_entry() {
            let p = entry.get_mut().pop().expect("nonempty bucket");
            if entry.get().is_empty() {
                entry.remove();
            }
            steps += 1;
            if steps > 10_000_000 {
                return Err(NcError::Confluence("completion did not stabilize".into()));
            }
            let r = b.reduce(&p);
            let Some((lead, _)) = r.leading(degrees) else {
                continue;
            };
            let lead = lead.clone();
            let monic = r.monic(degrees);
            let mut tail = monic.neg();
            tail.add_term(lead.clone(), &F::one());
            // rules whose lead contains the new lead are re-queued
            let stale: Vec<Word> = b
                .rules
                .keys()
                .filter(|k| super::poly::find_subword(k, &lead).is_some())
                .cloned()
                .collect();
            for k in stale {
                let t = b.rules.remove(&k).expect("present");
                let mut back = t.neg();
                back.add_term(k.clone(), &F::one());
                queue
                    .entry(word_degree(&k, degrees))
                    .or_default()
                    .push(back);
            }
            b.max_lead = b.max_lead.max(lead.len());
            b.rules.insert(lead.clone(), tail.clone());
            if lead.is_empty() {
                break;
            }
            let existing: Vec<(Word, NCPoly<F>)> = b
                .rules
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            for (k, t) in &existing {
                for (u, tu, v, tv) in [(&lead, &tail, k, t), (k, t, &lead, &tail)] {
                    let (ss, sk) = overlaps(u, tu, v, tv, degrees, bound);
                    skipped |= sk;
                    for s in ss {
                        if let Some(d) = s.degree(degrees) {
                            queue.entry(d).or_default().push(s);
                        }
                    }
                }
            }
        }
        b.max_lead = b.rules.keys().map(|k| k.len()).max().unwrap_or(0);
        let collapsed = b.rules.contains_key(&Word::new());
        let mut rules = b.rules;
        // interreduce tails so each rule rewrites straight to normal words
        if !collapsed {
            let snapshot = Builder {
                degrees,
                rules: rules.clone(),
                max_lead: b.max_lead,
            };
            for t in rules.values_mut() {
                *t = snapshot.reduce(t);
            }
        }
        // Overlaps are recomputed against the final rule set: the system is
        // complete in every degree only if none of them exceed the bound.
        let mut complete = !skipped;
        if complete {
            'outer: for u in rules.keys() {
                for v in rules.keys() {
                    for k in 1..u.len().min(v.len()) {
                        if u[u.len() - k..] == v[..k]
                            && word_degree(u, degrees) + word_degree(&v[k..], degrees) > bound
                        {
                            complete = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        Ok(Self {
            degrees: degrees.to_vec(),
            max_lead: rules.keys().map(|k| k.len()).max().unwrap_or(0),
            rules,
            bound,
            complete,
            collapsed,
            cache: Mutex::new(HashMap::new()),
            normal_words: Mutex::new(Vec::new()),
        })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// True when every overlap was resolved, so normal forms are valid in
    /// all degrees and not only up to the bound.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// True when the relations force `1 = 0`.
    pub fn is_collapsed(&self) -> bool {
        self.collapsed
    }

    pub fn rules(&self) -> impl Iterator<Item = (&Word, &NCPoly<F>)> {
        self.rules.iter()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    fn check_degree(&self, d: u32) -> Result<(), NcError> {
        if d > self.bound && !self.complete {
            return Err(NcError::DegreeExceeded {
                degree: d,
                bound: self.bound,
            });
        }
        Ok(())
    }

    pub fn is_normal(&self, w: &[u8]) -> bool {
        if self.collapsed {
            return false;
        }
        for start in 0..w.len() {
            for len in 1..=self.max_lead.min(w.len() - start) {
                if self.rules.contains_key(&w[start..start + len]) {
                    return false;
                }
            }
        }
        true
    }

    fn mul_gen(&self, x: u8, m: &[u8], steps: &mut u64) -> Result<NCPoly<F>, NcError> {
        *steps += 1;
        if *steps > STEP_BUDGET {
            return Err(NcError::Confluence(
                "rewriting exceeded the step budget".into(),
            ));
        }
        let key = (x, m.to_vec());
        if let Some(p) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(p.clone());
        }
        let mut w = Vec::with_capacity(m.len() + 1);
        w.push(x);
        w.extend_from_slice(m);
        let hit = (1..=self.max_lead.min(w.len())).find(|&l| self.rules.contains_key(&w[..l]));
        let res = match hit {
            None => NCPoly::word(w),
            Some(l) => {
                let rest = &w[l..];
                let mut acc = NCPoly::zero();
                for (u, c) in self.rules[&w[..l]].terms() {
                    let t = self.concat_normal(u, rest, steps)?;
                    acc.add_scaled(c, &t);
                }
                acc
            }
        };
        self.cache
            .lock()
            .expect("cache lock")
            .insert(key, res.clone());
        Ok(res)
    }

    /// Normal form of `u · rest` where `rest` is already normal.
    fn concat_normal(&self, u: &[u8], rest: &[u8], steps: &mut u64) -> Result<NCPoly<F>, NcError> {
        let mut t = NCPoly::word(rest.to_vec());
        for &g in u.iter().rev() {
            let mut next = NCPoly::zero();
            for (m, c) in t.terms() {
                next.add_scaled(c, &self.mul_gen(g, m, steps)?);
            }
            t = next;
        }
        Ok(t)
    }

    /// Normal form of an arbitrary polynomial.
    pub fn normal_form(&self, p: &NCPoly<F>) -> Result<NCPoly<F>, NcError> {
        if let Some(d) = p.degree(&self.degrees) {
            self.check_degree(d)?;
        }
        if self.collapsed {
            return Ok(NCPoly::zero());
        }
        let mut steps = 0;
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            out.add_scaled(c, &self.concat_normal(w, &[], &mut steps)?);
        }
        Ok(out)
    }

    /// Product of two polynomials already in normal form.
    pub fn mul_normal(&self, a: &NCPoly<F>, b: &NCPoly<F>) -> Result<NCPoly<F>, NcError> {
        if let (Some(x), Some(y)) = (a.degree(&self.degrees), b.degree(&self.degrees)) {
            self.check_degree(x + y)?;
        }
        if self.collapsed {
            return Ok(NCPoly::zero());
        }
        let mut steps = 0;
        let mut out = NCPoly::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                out.add_scaled(&ca.mul(cb), &self.concat_normal(wa, wb, &mut steps)?);
            }
        }
        Ok(out)
    }

    /// Reduce by rewriting randomly chosen occurrences; used to test that
    /// normal forms do not depend on the reduction order.
    pub fn reduce_randomly<R: Rng>(&self, p: &NCPoly<F>, rng: &mut R) -> NCPoly<F> {
        if self.collapsed {
            return NCPoly::zero();
        }
        let mut cur = p.clone();
        loop {
            let reducible: Vec<&Word> = cur.terms().keys().filter(|w| !self.is_normal(w)).collect();
            let Some(&w) = reducible.choose(rng) else {
                return cur;
            };
            let w = w.clone();
            let mut occ = Vec::new();
            for s in 0..w.len() {
                for l in 1..=self.max_lead.min(w.len() - s) {
                    if self.rules.contains_key(&w[s..s + l]) {
                        occ.push((s, l));
                    }
                }
            }
            let &(s, l) = occ.choose(rng).expect("reducible word has an occurrence");
            let c = cur.coeff(&w);
            cur.add_term(w.clone(), &c.neg());
            for (u, x) in self.rules[&w[s..s + l]].terms() {
                let mut nw = w[..s].to_vec();
                nw.extend_from_slice(u);
                nw.extend_from_slice(&w[s + l..]);
                cur.add_term(nw, &c.mul(x));
            }
        }
    }

    /// Normal words of weighted degree `d`, in increasing order.
    pub fn normal_words(&self, d: u32) -> Result<Vec<Word>, NcError> {
        self.check_degree(d)?;
        let mut cache = self.normal_words.lock().expect("normal word lock");
        if cache.is_empty() {
            cache.push(if self.collapsed {
                vec![]
            } else {
                vec![Word::new()]
            });
        }
        while cache.len() <= d as usize {
            let e = cache.len() as u32;
            let mut out = Vec::new();
            for (g, &dg) in self.degrees.iter().enumerate() {
                if dg > e {
                    continue;
                }
                for w in &cache[(e - dg) as usize] {
                    let mut nw = w.clone();
                    nw.push(g as u8);
                    let n = nw.len();
                    let ok =
                        (1..=self.max_lead.min(n)).all(|l| !self.rules.contains_key(&nw[n - l..]));
                    if ok {
                        out.push(nw);
                    }
                }
            }
            out.sort_by(|a, b| cmp_words(a, b, &self.degrees));
            cache.push(out);
        }
        Ok(cache[d as usize].clone())
    }

    pub fn graded_dimension(&self, d: u32) -> Result<usize, NcError> {
        Ok(self.normal_words(d)?.len())
    }

    /// Recheck every overlap of degree at most `bound` against the final
    /// rules; a pass certifies local confluence in that range.
    pub fn check_confluence(&self) -> CheckReport {
        let mut rep = CheckReport::new("confluence");
        rep.config("bound", self.bound);
        let b = Builder {
            degrees: &self.degrees,
            rules: self.rules.clone(),
            max_lead: self.max_lead,
        };
        let mut count = 0u64;
        for (u, tu) in &self.rules {
            for (v, tv) in &self.rules {
                let (ss, _) = overlaps(u, tu, v, tv, &self.degrees, self.bound);
                for s in ss {
                    count += 1;
                    let r = b.reduce(&s);
                    if !r.is_zero() {
                        rep.residual(
                            format!("overlap of {u:?} and {v:?}"),
                            format!("{} terms", r.len()),
                        );
                    }
                }
            }
        }
        rep.detail("overlaps", count);
        rep
    }
}
