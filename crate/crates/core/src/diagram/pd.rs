//! Planar-diagram codes: parsing, orientation and validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strand label as written in the PD code.
pub type Label = u32;

/// Plain serializable form of a diagram, also the JSON input format.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub crossings: Vec<[Label; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Vec<Label>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<Label>,
}

/// Where a strand starts and ends: `(crossing, position)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub crossing: usize,
    pub pos: usize,
}

/// An oriented link diagram.
///
/// Each crossing `X(a,b,c,d)` lists its four strands counterclockwise starting
/// from the incoming under-strand, so the under-strand runs `a -> c`. The
/// crossing is positive when the over-strand runs `d -> b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub crossings: Vec<[Label; 4]>,
    /// `+1` or `-1` per crossing.
    pub signs: Vec<i8>,
    /// Strand labels of each component in traversal order, starting from the smallest.
    pub components: Vec<Vec<Label>>,
    pub framings: Vec<i64>,
    pub basepoint: Option<Label>,
    /// Sorted strand labels; a strand's index is its position here.
    pub labels: Vec<Label>,
    /// Per strand index: slot where it ends (enters a crossing) and where it starts.
    pub heads: Vec<Option<Slot>>,
    pub tails: Vec<Option<Slot>>,
    /// Per strand index: owning component.
    pub component_of: Vec<usize>,
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram::from_spec(&DiagramSpec::default()).expect("empty diagram is valid")
    }

    /// A crossingless unlink with `n` components labelled `1..=n`.
    pub fn unlink(n: usize) -> Self {
        let spec = DiagramSpec {
            components: Some((1..=n as Label).map(|l| vec![l]).collect()),
            ..Default::default()
        };
        Diagram::from_spec(&spec).expect("unlink is valid")
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn n_plus(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    pub fn n_strands(&self) -> usize {
        self.labels.len()
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn strand_at(&self, slot: Slot) -> usize {
        self.index_of(self.crossings[slot.crossing][slot.pos]).expect("crossing labels are strands")
    }

    /// Whether the strand at `slot` enters the crossing there.
    pub fn is_incoming(&self, slot: Slot) -> bool {
        self.heads[self.strand_at(slot)] == Some(slot)
    }

    pub fn max_label(&self) -> Label {
        self.labels.last().copied().unwrap_or(0)
    }

    /// Strand labels that pass through no crossing.
    pub fn free_loops(&self) -> Vec<Label> {
        (0..self.n_strands()).filter(|&s| self.heads[s].is_none()).map(|s| self.labels[s]).collect()
    }

    pub fn from_spec(spec: &DiagramSpec) -> Result<Self> {
        let mut occ: BTreeMap<Label, Vec<Slot>> = BTreeMap::new();
        for (x, tuple) in spec.crossings.iter().enumerate() {
            for (p, &l) in tuple.iter().enumerate() {
                occ.entry(l).or_default().push(Slot { crossing: x, pos: p });
            }
        }
        for (&l, v) in &occ {
            if v.len() != 2 {
                return Err(Error::StrandMultiplicity { label: l, count: v.len() });
            }
        }
        let declared: Vec<Vec<Label>> = spec.components.clone().unwrap_or_default();
        let mut seen = BTreeSet::new();
        for c in &declared {
            if c.is_empty() {
                return Err(Error::Parse("empty component in header".into()));
            }
            for &l in c {
                if !seen.insert(l) {
                    return Err(Error::Parse(format!("strand {l} listed in two components")));
                }
            }
        }
        let mut labels: Vec<Label> = occ.keys().copied().collect();
        for &l in &seen {
            if !occ.contains_key(&l) {
                labels.push(l);
            }
        }
        labels.sort_unstable();
        let n = labels.len();
        let idx = |l: Label| labels.binary_search(&l).unwrap();

        // Partner of an occurrence along the strand, and the slot where the
        // traversal continues on the far side of a crossing.
        let other_end = |l: Label, s: Slot| -> Slot {
            let v = &occ[&l];
            if v[0] == s {
                v[1]
            } else {
                v[0]
            }
        };
        let across = |s: Slot| Slot { crossing: s.crossing, pos: (s.pos + 2) % 4 };

        let mut heads: Vec<Option<Slot>> = vec![None; n];
        let mut tails: Vec<Option<Slot>> = vec![None; n];
        let mut component_of = vec![usize::MAX; n];
        let mut cycles: Vec<Vec<Label>> = Vec::new();

        // Walks a component given one strand and its head, recording the cycle.
        let walk = |start: Label,
                    head: Slot,
                    heads: &mut Vec<Option<Slot>>,
                    tails: &mut Vec<Option<Slot>>|
         -> Result<Vec<Label>> {
            let mut out = Vec::new();
            let (mut l, mut h) = (start, head);
            loop {
                let i = idx(l);
                let t = other_end(l, h);
                if let Some(prev) = heads[i] {
                    if prev != h {
                        return Err(Error::InconsistentOrientation(l));
                    }
                    break;
                }
                if h.pos == 2 || t.pos == 0 {
                    return Err(Error::InconsistentOrientation(l));
                }
                heads[i] = Some(h);
                tails[i] = Some(t);
                out.push(l);
                let next_tail = across(h);
                let nl = spec.crossings[next_tail.crossing][next_tail.pos];
                h = other_end(nl, next_tail);
                l = nl;
            }
            if out.first() != Some(&l) {
                return Err(Error::InconsistentOrientation(l));
            }
            Ok(out)
        };

        // Components containing an under-passage have a forced direction.
        for (x, tuple) in spec.crossings.iter().enumerate() {
            let l = tuple[0];
            if heads[idx(l)].is_none() {
                cycles.push(walk(l, Slot { crossing: x, pos: 0 }, &mut heads, &mut tails)?);
            }
        }
        for x in 0..spec.crossings.len() {
            let l = spec.crossings[x][2];
            if heads[idx(l)].is_none() {
                return Err(Error::InconsistentOrientation(l));
            }
        }
        // Over-only components follow the header order, else increasing labels.
        for &l in &labels {
            if heads[idx(l)].is_some() || !occ.contains_key(&l) {
                continue;
            }
            let v = &occ[&l];
            let hint = declared.iter().find(|c| c.contains(&l)).and_then(|c| {
                let k = c.iter().position(|&m| m == l)?;
                c.get(k + 1).copied().filter(|_| c.len() > 1)
            });
            let next_from = |h: Slot| {
                let s = across(h);
                spec.crossings[s.crossing][s.pos]
            };
            let (n0, n1) = (next_from(v[0]), next_from(v[1]));
            let pick_first = match hint {
                Some(nx) if nx == n0 && nx != n1 => true,
                Some(nx) if nx == n1 && nx != n0 => false,
                _ => {
                    let d0 = n0.wrapping_sub(l);
                    let d1 = n1.wrapping_sub(l);
                    d0 == 1 || (d1 != 1 && n0 >= n1)
                }
            };
            let head = if pick_first { v[0] } else { v[1] };
            cycles.push(walk(l, head, &mut heads, &mut tails)?);
        }
        for &l in &labels {
            if !occ.contains_key(&l) {
                cycles.push(vec![l]);
            }
        }

        for c in &mut cycles {
            let k = c.iter().enumerate().min_by_key(|(_, &l)| l).map(|(k, _)| k).unwrap();
            c.rotate_left(k);
        }
        // Declared components come first in header order, the rest by smallest label.
        cycles.sort_by_key(|c| c[0]);
        let key = |c: &Vec<Label>| c.iter().copied().collect::<BTreeSet<_>>();
        let mut ordered = Vec::with_capacity(cycles.len());
        for d in &declared {
            let want: BTreeSet<Label> = d.iter().copied().collect();
            let k = cycles.iter().position(|c| key(c) == want).ok_or_else(|| {
                Error::Parse(format!("declared component {d:?} is not a traced component"))
            })?;
            ordered.push(cycles.remove(k));
        }
        ordered.extend(cycles);
        let cycles = ordered;
        for (k, c) in cycles.iter().enumerate() {
            for &l in c {
                component_of[idx(l)] = k;
            }
        }

        let signs = spec
            .crossings
            .iter()
            .enumerate()
            .map(|(x, t)| {
                let d = idx(t[3]);
                if heads[d] == Some(Slot { crossing: x, pos: 3 }) {
                    1
                } else {
                    -1
                }
            })
            .collect();

        let framings = match &spec.framing {
            Some(f) if f.len() == cycles.len() => f.clone(),
            Some(f) => {
                return Err(Error::Parse(format!(
                    "{} framings given for {} components",
                    f.len(),
                    cycles.len()
                )))
            }
            None => vec![0; cycles.len()],
        };
        if let Some(b) = spec.basepoint {
            if labels.binary_search(&b).is_err() {
                return Err(Error::Parse(format!("basepoint strand {b} is not in the diagram")));
            }
        }

        Ok(Diagram {
            crossings: spec.crossings.clone(),
            signs,
            components: cycles,
            framings,
            basepoint: spec.basepoint,
            labels,
            heads,
            tails,
            component_of,
        })
    }

    pub fn to_spec(&self) -> DiagramSpec {
        DiagramSpec {
            crossings: self.crossings.clone(),
            components: Some(self.components.clone()),
            framing: Some(self.framings.clone()),
            basepoint: self.basepoint,
        }
    }

    /// Text form accepted by [`parse_pd`].
    pub fn to_pd_text(&self) -> String {
        let mut s = String::new();
        if !self.components.is_empty() {
            let comps: Vec<String> = self
                .components
                .iter()
                .map(|c| c.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            let _ = writeln!(s, "components: {}", comps.join(" | "));
            let fr: Vec<String> = self.framings.iter().map(|f| f.to_string()).collect();
            let _ = writeln!(s, "framing: {}", fr.join(" "));
        }
        if let Some(b) = self.basepoint {
            let _ = writeln!(s, "basepoint: {b}");
        }
        let xs: Vec<String> =
            self.crossings.iter().map(|t| format!("X({},{},{},{})", t[0], t[1], t[2], t[3])).collect();
        s.push_str(&xs.join(" "));
        s.push('\n');
        s
    }

    pub fn with_basepoint(mut self, b: Label) -> Result<Self> {
        if self.index_of(b).is_none() {
            return Err(Error::Parse(format!("basepoint strand {b} is not in the diagram")));
        }
        self.basepoint = Some(b);
        Ok(self)
    }

    pub fn with_framings(mut self, f: Vec<i64>) -> Result<Self> {
        if f.len() != self.components.len() {
            return Err(Error::Parse("framing count does not match component count".into()));
        }
        self.framings = f;
        Ok(self)
    }
}

/// Parses the text PD format: `X(a,b,c,d)` tuples separated by whitespace,
/// commas or brackets, plus optional `components:`, `framing:` and `basepoint:`
/// header lines. Components are separated by `|`; `#` starts a comment.
/// Crossingless components must be declared; others may be, to fix their order.
pub fn parse_pd(text: &str) -> Result<Diagram> {
    Diagram::from_spec(&parse_pd_spec(text)?)
}

pub fn parse_pd_spec(text: &str) -> Result<DiagramSpec> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()));
    }
    let mut spec = DiagramSpec::default();
    let mut body = String::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        if let Some((key, value)) = line.split_once(':') {
            let key = key.trim();
            match key {
                "components" => {
                    let comps = value
                        .split('|')
                        .map(|c| c.split_whitespace().map(parse_label).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    spec.components = Some(comps.into_iter().filter(|c| !c.is_empty()).collect());
                }
                "framing" => {
                    let f = value
                        .split_whitespace()
                        .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad framing {t:?}"))))
                        .collect::<Result<Vec<_>>>()?;
                    spec.framing = Some(f);
                }
                "basepoint" => spec.basepoint = Some(parse_label(value.trim())?),
                _ => return Err(Error::Parse(format!("unknown header {key:?}"))),
            }
        } else {
            body.push_str(line);
            body.push(' ');
        }
    }
    let body = body.trim();
    let body = body.strip_prefix("PD").unwrap_or(body).trim();
    let mut rest = body;
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',' || c == '[' || c == ']');
        if rest.is_empty() {
            break;
        }
        let Some(after) = rest.strip_prefix("X[").or_else(|| rest.strip_prefix("X(")) else {
            return Err(Error::MalformedTuple(rest.chars().take(20).collect()));
        };
        let close = after.find([')', ']']).ok_or_else(|| Error::MalformedTuple(rest.chars().take(20).collect()))?;
        let inner = &after[..close];
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::MalformedTuple(format!("X({inner})")));
        }
        let mut t = [0; 4];
        for (k, p) in parts.iter().enumerate() {
            t[k] = p.parse().map_err(|_| Error::MalformedTuple(format!("X({inner})")))?;
        }
        spec.crossings.push(t);
        rest = &after[close + 1..];
    }
    Ok(spec)
}

fn parse_label(s: &str) -> Result<Label> {
    s.parse().map_err(|_| Error::Parse(format!("bad strand label {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(d.n_crossings(), 3);
        assert_eq!(d.n_components(), 1);
        assert_eq!(d.n_plus() + d.n_minus(), 3);
        assert_eq!(d.components[0], vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn hopf() {
        let d = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap();
        assert_eq!(d.n_components(), 2);
        assert_eq!(d.signs, vec![1, 1]);
    }

    #[test]
    fn unknot_needs_header() {
        let d = parse_pd("components: 1").unwrap();
        assert_eq!(d.n_components(), 1);
        assert_eq!(d.free_loops(), vec![1]);
        assert_eq!(parse_pd("").unwrap().n_components(), 0);
    }

    #[test]
    fn errors_are_distinct() {
        assert!(matches!(parse_pd("X(1,2,3)"), Err(Error::MalformedTuple(_))));
        assert!(matches!(parse_pd("X(1,2,3,4)"), Err(Error::StrandMultiplicity { .. })));
        // Strand 1 would enter both crossings as the under-strand.
        assert!(matches!(parse_pd("X(1,2,3,4) X(1,4,3,2)"), Err(Error::InconsistentOrientation(_))));
    }

    #[test]
    fn text_round_trip() {
        let d = parse_pd("basepoint: 2\nX(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let again = parse_pd(&d.to_pd_text()).unwrap();
        assert_eq!(d, again);
        let json = serde_json::to_string(&d.to_spec()).unwrap();
        assert_eq!(parse_pd(&json).unwrap(), d);
    }
}
