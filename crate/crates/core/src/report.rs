use std::fmt;

/// Accumulated findings of an exhaustive check. Empty means the checked
/// object satisfies every invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report<I> {
    issues: Vec<I>,
}

impl<I> Default for Report<I> {
    fn default() -> Self {
        Report { issues: Vec::new() }
    }
}

impl<I> Report<I> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, issue: I) {
        self.issues.push(issue);
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn len(&self) -> usize {
        self.issues.len()
    }

    pub fn issues(&self) -> &[I] {
        &self.issues
    }

    pub fn iter(&self) -> std::slice::Iter<'_, I> {
        self.issues.iter()
    }

    pub fn extend(&mut self, other: Report<I>) {
        self.issues.extend(other.issues);
    }

    pub fn any(&self, pred: impl Fn(&I) -> bool) -> bool {
        self.issues.iter().any(pred)
    }
}

impl<I: fmt::Display> fmt::Display for Report<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "ok");
        }
        for (n, issue) in self.issues.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl<'a, I> IntoIterator for &'a Report<I> {
    type Item = &'a I;
    type IntoIter = std::slice::Iter<'a, I>;

    fn into_iter(self) -> Self::IntoIter {
        self.issues.iter()
    }
}
