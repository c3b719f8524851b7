use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// An ordered set of variable names shared by symbolic values.
///
/// Cloning a context is cheap (it is reference counted). Two contexts are
/// considered compatible when their name lists are equal, so values that were
/// deserialised independently still interoperate.
#[derive(Clone)]
pub struct Context {
    inner: Arc<VarSet>,
}

struct VarSet {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Context {
    /// Builds a context from distinct variable names, in the given order.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut index = BTreeMap::new();
        let mut owned = Vec::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref();
            if name.is_empty() {
                return Err(Error::InvalidInput("empty variable name".into()));
            }
            if index.insert(name.to_string(), i).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate variable name '{name}'"
                )));
            }
            owned.push(name.to_string());
        }
        Ok(Context {
            inner: Arc::new(VarSet {
                names: owned,
                index,
            }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.inner.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.inner.index.get(name).copied()
    }

    /// Index lookup that reports unknown names as [`Error::InvalidInput`].
    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable '{name}'")))
    }

    /// Checks that `other` names the same variables in the same order.
    pub fn check_same(&self, other: &Context) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch(
                self.names().join(","),
                other.names().join(","),
            ))
        }
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.names == other.inner.names
    }
}

impl Eq for Context {}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Context[{}]", self.inner.names.join(", "))
    }
}
