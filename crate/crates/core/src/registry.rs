//! Name-keyed registries of interchangeable strategies.
//!
//! Each family of algorithms (height evaluation, coincidence search, real
//! sources for the reduction step) exposes a trait; concrete variants are
//! registered under a stable name and looked up at runtime from the CLI or
//! a pipeline config.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<String, Arc<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Registers `item` under `name`, replacing any previous entry.
    pub fn register(&mut self, name: impl Into<String>, item: Arc<T>) {
        self.entries.insert(name.into(), item);
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Send + Sync {
        fn greet(&self) -> String;
    }

    struct Hello;
    impl Greeter for Hello {
        fn greet(&self) -> String {
            "hello".into()
        }
    }

    #[test]
    fn lookup_and_unknown_names() {
        let mut r: Registry<dyn Greeter> = Registry::new("greeter");
        r.register("hello", Arc::new(Hello));
        assert_eq!(r.get("hello").unwrap().greet(), "hello");
        let err = r.get("bye").err().unwrap().to_string();
        assert!(err.contains("unknown greeter `bye`"));
        assert!(err.contains("hello"));
    }
}
