use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::varset::{VarSet, MAX_VARS};

/// An ordered finite set of named variables.
///
/// Variables are addressed by name externally and by position internally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    names: Arc<[String]>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidUniverse("no variables".into()));
        }
        if names.len() > MAX_VARS {
            return Err(Error::UniverseTooLarge {
                n: names.len(),
                cap: MAX_VARS,
            });
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || !is_valid_name(name) {
                return Err(Error::InvalidUniverse(format!(
                    "bad variable name {name:?}"
                )));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidUniverse(format!(
                    "duplicate variable {name:?}"
                )));
            }
        }
        Ok(Universe {
            names: names.into(),
        })
    }

    /// Variables named `1`, `2`, .., `n`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn full(&self) -> VarSet {
        VarSet::full(self.n())
    }

    pub fn contains_set(&self, set: VarSet) -> bool {
        set.span() <= self.n()
    }

    /// Fails with [`Error::UniverseTooLarge`] when `n > cap`.
    pub fn check_cap(&self, cap: usize) -> Result<()> {
        if self.n() > cap {
            Err(Error::UniverseTooLarge { n: self.n(), cap })
        } else {
            Ok(())
        }
    }

    /// Appends the names not yet present, keeping existing indices.
    pub fn extended<'a, I>(&self, names: I) -> Result<Universe>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut all: Vec<String> = self.names.to_vec();
        for name in names {
            if !all.iter().any(|n| n == name) {
                all.push(name.to_string());
            }
        }
        Universe::new(all)
    }

    /// The universe restricted to the members of `set`, in index order.
    pub fn restrict(&self, set: VarSet) -> Result<Universe> {
        Universe::new(set.iter().map(|i| self.names[i].clone()))
    }

    pub fn set_from_names<'a, I>(&self, names: I) -> Result<VarSet>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut set = VarSet::EMPTY;
        for name in names {
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::InvalidUniverse(format!("unknown variable {name:?}")))?;
            set = set.union(VarSet::singleton(i));
        }
        Ok(set)
    }

    pub fn display_set(&self, set: VarSet) -> String {
        set.iter()
            .map(|i| self.names[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    name.chars()
        .all(|c| !c.is_whitespace() && !matches!(c, ',' | ';' | '|' | '#' | ':'))
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_universes() {
        assert!(Universe::new(Vec::<String>::new()).is_err());
        assert!(Universe::new(["a", "a"]).is_err());
        assert!(Universe::new(["a", "b;c"]).is_err());
        assert!(Universe::new([""]).is_err());
        assert!(matches!(
            Universe::numbered(17),
            Err(Error::UniverseTooLarge { n: 17, .. })
        ));
    }

    #[test]
    fn indices_follow_positions() {
        let u = Universe::new(["x", "y", "z"]).unwrap();
        assert_eq!(u.index_of("z"), Some(2));
        assert_eq!(
            u.set_from_names(["z", "x"]).unwrap(),
            VarSet::from_indices([0, 2])
        );
        let v = u.extended(["y", "w"]).unwrap();
        assert_eq!(v.names(), ["x", "y", "z", "w"]);
    }
}
