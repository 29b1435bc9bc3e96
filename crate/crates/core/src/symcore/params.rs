use alloc::string::String;
use alloc::vec::Vec;

/// Ordered list of distinct parameter names. The order is fixed for the
/// lifetime of a model; it drives normalization and display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSpace {
    names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamSpaceError {
    #[error("duplicate parameter name `{0}`")]
    Duplicate(String),
}

impl ParamSpace {
    pub fn new<I, S>(names: I) -> Result<Self, ParamSpaceError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].iter().any(|m| m == n) {
                return Err(ParamSpaceError::Duplicate(n.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}
