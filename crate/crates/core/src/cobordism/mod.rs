//! Link cobordisms given as movies, and the maps they induce.

mod induced;
mod maps;

use serde::{Deserialize, Serialize};

use crate::diagram::moves::{apply_move, Applied, Move};
use crate::diagram::{parse_pd, Diagram};
use crate::error::{Error, Result};

pub use induced::{distinguishing_element, h_action, induced_on_homology, HomologyMap};
pub use maps::{elementary_map, movie_map, ElementaryMap, MovieMap};

/// A movie: a start diagram and a sequence of local moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Movie {
    pub start: Diagram,
    /// Expected last frame; checked against the moves when present.
    pub end: Option<Diagram>,
    pub moves: Vec<Move>,
}

/// Serializable form of a movie.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MovieSpec {
    pub start: String,
    #[serde(default)]
    pub end: Option<String>,
    pub moves: Vec<Move>,
}

const MOVE_VERBS: [&str; 11] = ["r1", "r1+", "r1-", "r2", "r2+", "r2-", "r3", "saddle", "birth", "death", "dot"];

impl Movie {
    pub fn new(start: Diagram, moves: Vec<Move>) -> Self {
        Movie { start, end: None, moves }
    }

    /// Parses the text format: a `start:` block of PD text, an optional `end:`
    /// block, and one move per line. Lines starting with a move name are moves;
    /// all other lines belong to the current block.
    pub fn parse(text: &str) -> Result<Self> {
        let mut start = String::new();
        let mut end: Option<String> = None;
        let mut moves = Vec::new();
        let mut in_end = false;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let first = line.split_whitespace().next().unwrap().to_ascii_lowercase();
            if let Some(rest) = line.strip_prefix("start:") {
                in_end = false;
                start.push_str(rest);
                start.push('\n');
            } else if let Some(rest) = line.strip_prefix("end:") {
                in_end = true;
                let e = end.get_or_insert_with(String::new);
                e.push_str(rest);
                e.push('\n');
            } else if MOVE_VERBS.contains(&first.as_str()) {
                moves.push(line.parse()?);
            } else if in_end {
                let e = end.get_or_insert_with(String::new);
                e.push_str(line);
                e.push('\n');
            } else {
                start.push_str(line);
                start.push('\n');
            }
        }
        let start = parse_pd(&start)?;
        let end = end.map(|e| parse_pd(&e)).transpose()?;
        Ok(Movie { start, end, moves })
    }

    pub fn from_spec(spec: &MovieSpec) -> Result<Self> {
        Ok(Movie {
            start: parse_pd(&spec.start)?,
            end: spec.end.as_deref().map(parse_pd).transpose()?,
            moves: spec.moves.clone(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("start:\n");
        s.push_str(&self.start.to_pd_text());
        if let Some(e) = &self.end {
            s.push_str("end:\n");
            s.push_str(&e.to_pd_text());
        }
        for m in &self.moves {
            s.push_str(&m.to_string());
            s.push('\n');
        }
        s
    }

    /// Applies the moves in turn, checking the declared end frame.
    pub fn frames(&self) -> Result<Vec<Applied>> {
        let mut out: Vec<Applied> = Vec::with_capacity(self.moves.len());
        for (i, m) in self.moves.iter().enumerate() {
            let cur = out.last().map_or(&self.start, |a| &a.diagram);
            let a = apply_move(cur, m).map_err(|e| match e {
                Error::InvalidMove(why) => Error::InvalidMove(format!("move {} ({m}): {why}", i + 1)),
                other => other,
            })?;
            out.push(a);
        }
        if let Some(end) = &self.end {
            let last = out.last().map_or(&self.start, |a| &a.diagram);
            if !same_frame(last, end) {
                return Err(Error::FrameMismatch(format!(
                    "moves end at\n{}but the movie declares\n{}",
                    last.to_pd_text(),
                    end.to_pd_text()
                )));
            }
        }
        Ok(out)
    }

    /// The last frame.
    pub fn end_diagram(&self) -> Result<Diagram> {
        Ok(self.frames()?.pop().map_or_else(|| self.start.clone(), |a| a.diagram))
    }

    /// Euler characteristic of the surface: births plus deaths minus saddles.
    pub fn euler(&self) -> i32 {
        self.moves.iter().map(|m| m.euler()).sum()
    }

    pub fn dots(&self) -> usize {
        self.moves.iter().filter(|m| matches!(m, Move::Dot { .. })).count()
    }

    /// q-degree of the induced map.
    pub fn q_degree(&self) -> i32 {
        -self.euler() + 2 * self.dots() as i32
    }
}

/// Two frames agree when they have the same crossings and the same circles.
pub fn same_frame(a: &Diagram, b: &Diagram) -> bool {
    a.crossings == b.crossings && a.labels == b.labels && a.free_loops() == b.free_loops()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_movie() {
        let m = Movie::parse("start:\ncomponents: 1\nend: components: 1\nbirth\ndot 2\ndeath 2\n").unwrap();
        assert_eq!(m.moves.len(), 3);
        assert_eq!(m.euler(), 2);
        assert_eq!(m.q_degree(), 0);
        m.frames().unwrap();
        let again = Movie::parse(&m.to_text()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn frame_mismatch() {
        let m = Movie::parse("start: components: 1\nend: components: 1\nbirth\n").unwrap();
        assert!(matches!(m.frames(), Err(Error::FrameMismatch(_))));
    }

    #[test]
    fn invalid_location() {
        let m = Movie::parse("start: components: 1\ndeath 5\n").unwrap();
        assert!(matches!(m.frames(), Err(Error::InvalidMove(_))));
    }
}
