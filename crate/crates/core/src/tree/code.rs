use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::Tree;
use crate::error::{Error, Result};

/// Nesting deeper than this is rejected by the parser. Trees that deep have
/// births far beyond any bit budget anyway.
const MAX_DEPTH: usize = 4096;

/// Canonical balanced-parenthesis serialization of a [`Tree`].
///
/// `r` is `"()"`; any other tree is `"("`, its children's codes in canonical
/// order, then `")"`. Two trees are equal iff their codes are byte-identical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeCode(String);

impl TreeCode {
    pub(crate) fn from_tree(t: &Tree) -> Self {
        let mut s = String::with_capacity(2 * t.vertex_count());
        t.write_code(&mut s);
        TreeCode(s)
    }

    /// Validates `text` as a canonical code.
    pub fn parse(text: &str) -> Result<Self> {
        decode_str(text)?;
        Ok(TreeCode(text.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn decode(&self) -> Tree {
        decode_str(&self.0).expect("TreeCode holds validated text")
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

/// Parses canonical code text into a tree.
///
/// Fails on unbalanced input, trailing text, foreign characters, and children
/// that are not in canonical order; the error names the byte offset.
pub fn decode_str(text: &str) -> Result<Tree> {
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(Error::parse(0, "empty tree code"));
    }
    // Each open frame: offset of its '(', children so far with their spans.
    type Frame = (usize, Vec<(Tree, usize, usize)>);
    let mut stack: Vec<Frame> = Vec::new();
    let mut done: Option<Tree> = None;
    for (pos, &b) in bytes.iter().enumerate() {
        if done.is_some() {
            return Err(Error::parse(pos, "trailing characters after the root"));
        }
        match b {
            b'(' => {
                if stack.len() >= MAX_DEPTH {
                    return Err(Error::parse(
                        pos,
                        format!("nesting deeper than {MAX_DEPTH}"),
                    ));
                }
                stack.push((pos, Vec::new()));
            }
            b')' => {
                let (start, kids) = stack
                    .pop()
                    .ok_or_else(|| Error::parse(pos, "unmatched ')'"))?;
                for w in kids.windows(2) {
                    let (_, a0, a1) = w[0];
                    let (_, b0, b1) = w[1];
                    let (a, b) = (&bytes[a0..a1], &bytes[b0..b1]);
                    if (a.len(), a) > (b.len(), b) {
                        return Err(Error::parse(b0, "children are not in canonical order"));
                    }
                }
                let node = Tree {
                    children: kids.into_iter().map(|(t, _, _)| t).collect(),
                };
                match stack.last_mut() {
                    Some((_, siblings)) => siblings.push((node, start, pos + 1)),
                    None => done = Some(node),
                }
            }
            other => {
                return Err(Error::parse(
                    pos,
                    format!("unexpected character {:?}", other as char),
                ))
            }
        }
    }
    match done {
        Some(t) => Ok(t),
        None => Err(Error::parse(bytes.len(), "unbalanced: missing ')'")),
    }
}

impl FromStr for TreeCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TreeCode::parse(s)
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        decode_str(s)
    }
}

impl From<&Tree> for TreeCode {
    fn from(t: &Tree) -> Self {
        t.encode()
    }
}

impl fmt::Display for TreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for TreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreeCode({})", self.0)
    }
}

impl Serialize for TreeCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}
