//! Freely reduced words over a finite basis, stored run-length encoded.
//!
//! Generators are indices `0..rank`; a run `(g, k)` stands for `g^k` with
//! `k != 0`, and adjacent runs never share a generator, so every value is
//! freely reduced by construction.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::GogError;

/// A single letter `g^{±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: u32,
    pub inverse: bool,
}

impl Letter {
    fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    runs: Vec<(u32, i64)>,
}

fn push_run(runs: &mut Vec<(u32, i64)>, g: u32, k: i64) {
    if k == 0 {
        return;
    }
    if let Some(last) = runs.last_mut() {
        if last.0 == g {
            last.1 += k;
            if last.1 == 0 {
                runs.pop();
            }
            return;
        }
    }
    runs.push((g, k));
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(g: u32) -> Self {
        Self { runs: vec![(g, 1)] }
    }

    pub fn power(g: u32, k: i64) -> Self {
        Self::from_runs([(g, k)])
    }

    /// Builds a word from arbitrary runs, reducing as it goes.
    pub fn from_runs<I: IntoIterator<Item = (u32, i64)>>(runs: I) -> Self {
        let mut out = Vec::new();
        for (g, k) in runs {
            push_run(&mut out, g, k);
        }
        Self { runs: out }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Self::from_runs(
            letters
                .into_iter()
                .map(|l| (l.generator, if l.inverse { -1 } else { 1 })),
        )
    }

    pub fn runs(&self) -> &[(u32, i64)] {
        &self.runs
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.len());
        for &(g, k) in &self.runs {
            for _ in 0..k.unsigned_abs() {
                out.push(Letter {
                    generator: g,
                    inverse: k < 0,
                });
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.runs.iter().map(|r| r.1.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Largest generator index occurring in the word.
    pub fn max_generator(&self) -> Option<u32> {
        self.runs.iter().map(|r| r.0).max()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut runs = self.runs.clone();
        for &(g, k) in &other.runs {
            push_run(&mut runs, g, k);
        }
        FreeWord { runs }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            runs: self.runs.iter().rev().map(|&(g, k)| (g, -k)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        if k < 0 {
            return self.inverse().pow(-k);
        }
        let mut acc = FreeWord::identity();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `c * self * c^-1`.
    pub fn conjugate_by(&self, c: &FreeWord) -> FreeWord {
        c.mul(self).mul(&c.inverse())
    }

    pub fn commutes_with(&self, other: &FreeWord) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Returns `(core, conj)` with `core` cyclically reduced and
    /// `self = conj * core * conj^-1`.
    pub fn cyclic_reduce(&self) -> (FreeWord, FreeWord) {
        let letters = self.letters();
        let mut i = 0;
        let mut j = letters.len();
        while j >= i + 2 && letters[i] == letters[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        (
            FreeWord::from_letters(letters[i..j].iter().copied()),
            FreeWord::from_letters(letters[..i].iter().copied()),
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.cyclic_reduce().1.is_identity()
    }

    /// The unique `(root, n)` with `n >= 1`, `self = root^n` and `root` not a
    /// proper power.
    pub fn primitive_root(&self) -> Result<(FreeWord, u64), GogError> {
        if self.is_identity() {
            return Err(GogError::IdentityRoot);
        }
        let (core, conj) = self.cyclic_reduce();
        let letters = core.letters();
        let n = letters.len();
        for p in 1..=n {
            if n % p != 0 {
                continue;
            }
            if (p..n).all(|i| letters[i] == letters[i - p]) {
                let root = FreeWord::from_letters(letters[..p].iter().copied());
                return Ok((root.conjugate_by(&conj), (n / p) as u64));
            }
        }
        unreachable!("the full word is always a period of itself")
    }

    /// `Some(k)` when `self = base^k`.
    pub fn power_of(&self, base: &FreeWord) -> Result<Option<i64>, GogError> {
        if self.is_identity() {
            return Ok(Some(0));
        }
        if base.is_identity() {
            return Err(GogError::TrivialBase);
        }
        let (rho, m) = base.primitive_root()?;
        let (sigma, n) = self.primitive_root()?;
        if n % m != 0 {
            return Ok(None);
        }
        let k = (n / m) as i64;
        if sigma == rho {
            Ok(Some(k))
        } else if sigma == rho.inverse() {
            Ok(Some(-k))
        } else {
            Ok(None)
        }
    }

    /// Some `c` with `self = c * other * c^-1`, if the two are conjugate.
    pub fn conjugator_to(&self, other: &FreeWord) -> Option<FreeWord> {
        let (u, cu) = self.cyclic_reduce();
        let (v, cv) = other.cyclic_reduce();
        if u.len() != v.len() {
            return None;
        }
        if u.is_identity() {
            return Some(cu.mul(&cv.inverse()));
        }
        let vl = v.letters();
        let n = vl.len();
        for i in 0..n {
            let rotated = FreeWord::from_letters(vl[i..].iter().chain(vl[..i].iter()).copied());
            if rotated == u {
                let t = FreeWord::from_letters(vl[i..].iter().copied());
                let t = if i == 0 { FreeWord::identity() } else { t };
                let c = cu.mul(&t).mul(&cv.inverse());
                debug_assert_eq!(other.conjugate_by(&c), *self);
                return Some(c);
            }
        }
        None
    }

    /// Substitutes `images[g]` for every generator `g`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let mut acc = FreeWord::identity();
        for &(g, k) in &self.runs {
            acc = acc.mul(&images[g as usize].pow(k));
        }
        acc
    }

    /// Renders with the given generator names, `1` for the identity.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_identity() {
            return "1".to_string();
        }
        let parts: Vec<String> = self
            .runs
            .iter()
            .map(|&(g, k)| {
                let name = names
                    .get(g as usize)
                    .cloned()
                    .unwrap_or_else(|| format!("g{g}"));
                if k == 1 {
                    name
                } else {
                    format!("{name}^{k}")
                }
            })
            .collect();
        parts.join(" ")
    }

    /// Parses `a^2 b^-1 c`; `*` and `.` also separate factors and `1` is the
    /// identity.
    pub fn parse(text: &str, names: &[String]) -> Result<FreeWord, GogError> {
        let mut runs = Vec::new();
        let mut column = 0;
        for raw in text.split(|c: char| c.is_whitespace() || c == '*' || c == '.' || c == '·') {
            let token = raw.trim();
            column += raw.len() + 1;
            if token.is_empty() || token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| GogError::Syntax {
                        column,
                        message: format!("bad exponent in `{token}`"),
                    })?;
                    (n, e)
                }
                None => (token, 1),
            };
            let g = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| GogError::UnknownGenerator(name.to_string()))?;
            runs.push((g as u32, exp));
        }
        Ok(FreeWord::from_runs(runs))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

/// Inverts the endomorphism of the free group of rank `rank` sending
/// generator `i` to `images[i]`. Fails when it is not an automorphism or
/// when no certificate is found within the search bounds.
pub fn invert_automorphism(images: &[FreeWord], rank: u32) -> Result<Vec<FreeWord>, GogError> {
    let n = rank as usize;
    if images.len() != n {
        return Err(GogError::GroupMismatch(format!(
            "{} images given for rank {rank}",
            images.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if let Some(inv) = nielsen_invert(images, n) {
        return Ok(inv);
    }
    if let Some(inv) = search_invert(images, n, 6) {
        return Ok(inv);
    }
    Err(GogError::Unsupported(
        "could not certify the map as a free-group automorphism".into(),
    ))
}

fn verify_inverse(images: &[FreeWord], inv: &[FreeWord]) -> bool {
    inv.iter()
        .enumerate()
        .all(|(i, w)| w.substitute(images) == FreeWord::generator(i as u32))
}

fn nielsen_invert(images: &[FreeWord], n: usize) -> Option<Vec<FreeWord>> {
    let mut u: Vec<FreeWord> = images.to_vec();
    let mut track: Vec<FreeWord> = (0..n as u32).map(FreeWord::generator).collect();
    loop {
        if u.iter().any(|w| w.is_identity()) {
            return None;
        }
        let mut best: Option<(usize, FreeWord, FreeWord, usize)> = None;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for s in [1, -1] {
                    let uj = u[j].pow(s);
                    let tj = track[j].pow(s);
                    for right in [true, false] {
                        let (cand, tcand) = if right {
                            (u[i].mul(&uj), track[i].mul(&tj))
                        } else {
                            (uj.mul(&u[i]), tj.mul(&track[i]))
                        };
                        let gain = u[i].len().saturating_sub(cand.len());
                        if cand.len() < u[i].len() && best.as_ref().is_none_or(|b| gain > b.3) {
                            best = Some((i, cand, tcand, gain));
                        }
                    }
                }
            }
        }
        match best {
            Some((i, cand, tcand, _)) => {
                u[i] = cand;
                track[i] = tcand;
            }
            None => break,
        }
    }
    let mut inv = vec![FreeWord::identity(); n];
    let mut seen = vec![false; n];
    for (i, w) in u.iter().enumerate() {
        if w.len() != 1 {
            return None;
        }
        let (g, k) = w.runs()[0];
        let g = g as usize;
        if g >= n || seen[g] {
            return None;
        }
        seen[g] = true;
        inv[g] = track[i].pow(k);
    }
    verify_inverse(images, &inv).then_some(inv)
}

fn search_invert(images: &[FreeWord], n: usize, depth: usize) -> Option<Vec<FreeWord>> {
    let mut inv: Vec<Option<FreeWord>> = vec![None; n];
    let mut seen: HashSet<FreeWord> = HashSet::new();
    let mut queue: VecDeque<(FreeWord, FreeWord, usize)> = VecDeque::new();
    queue.push_back((FreeWord::identity(), FreeWord::identity(), 0));
    seen.insert(FreeWord::identity());
    while let Some((img, pre, d)) = queue.pop_front() {
        if img.len() == 1 {
            let (g, k) = img.runs()[0];
            if (g as usize) < n && inv[g as usize].is_none() {
                inv[g as usize] = Some(pre.pow(k));
            }
            if inv.iter().all(|x| x.is_some()) {
                break;
            }
        }
        if d == depth {
            continue;
        }
        for (j, w) in images.iter().enumerate() {
            for s in [1, -1] {
                let next = img.mul(&w.pow(s));
                if seen.insert(next.clone()) {
                    let pnext = pre.mul(&FreeWord::power(j as u32, s));
                    queue.push_back((next, pnext, d + 1));
                }
            }
        }
    }
    let inv: Vec<FreeWord> = inv.into_iter().collect::<Option<_>>()?;
    verify_inverse(images, &inv).then_some(inv)
}
