//! Weighted relations and the value dictionary.

use std::collections::{BTreeMap, HashMap};

/// A database value. Integers are stored directly; any other text is
/// interned into the database's symbol table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Sym(u32),
}

#[derive(Debug, Clone, Default)]
pub struct Symbols {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Symbols {
    pub fn intern(&mut self, text: &str) -> Value {
        if let Ok(i) = text.parse::<i64>() {
            return Value::Int(i);
        }
        if let Some(&id) = self.index.get(text) {
            return Value::Sym(id);
        }
        let id = self.names.len() as u32;
        self.names.push(text.to_string());
        self.index.insert(text.to_string(), id);
        Value::Sym(id)
    }

    /// Like [`Symbols::intern`] but never grows the table.
    pub fn lookup(&self, text: &str) -> Option<Value> {
        if let Ok(i) = text.parse::<i64>() {
            return Some(Value::Int(i));
        }
        self.index.get(text).map(|&id| Value::Sym(id))
    }

    pub fn render(&self, v: Value) -> String {
        match v {
            Value::Int(i) => i.to_string(),
            Value::Sym(id) => self.names[id as usize].clone(),
        }
    }

    /// `(a,b,...)` with every value rendered.
    pub fn render_row(&self, vs: &[Value]) -> String {
        let parts: Vec<String> = vs.iter().map(|&v| self.render(v)).collect();
        format!("({})", parts.join(","))
    }

    pub fn json(&self, v: Value) -> serde_json::Value {
        match v {
            Value::Int(i) => serde_json::Value::from(i),
            Value::Sym(id) => serde_json::Value::from(self.names[id as usize].clone()),
        }
    }
}

/// A bag of weighted tuples of fixed arity, stored row-major.
#[derive(Debug, Clone)]
pub struct Relation<W> {
    arity: usize,
    values: Vec<Value>,
    weights: Vec<W>,
}

impl<W: Clone> Relation<W> {
    pub fn new(arity: usize) -> Self {
        Relation {
            arity,
            values: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn from_rows<I>(arity: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = (Vec<Value>, W)>,
    {
        let mut r = Relation::new(arity);
        for (row, w) in rows {
            r.push(&row, w);
        }
        r
    }

    pub fn push(&mut self, row: &[Value], weight: W) {
        assert_eq!(row.len(), self.arity, "row arity does not match relation");
        self.values.extend_from_slice(row);
        self.weights.push(weight);
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn row(&self, i: usize) -> &[Value] {
        &self.values[i * self.arity..(i + 1) * self.arity]
    }

    pub fn weight(&self, i: usize) -> &W {
        &self.weights[i]
    }

    pub fn weights_mut(&mut self) -> &mut [W] {
        &mut self.weights
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[Value], &W)> + '_ {
        (0..self.len()).map(move |i| (self.row(i), &self.weights[i]))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Database<W> {
    relations: BTreeMap<String, Relation<W>>,
    pub symbols: Symbols,
}

impl<W: Clone> Database<W> {
    pub fn new() -> Self {
        Database {
            relations: BTreeMap::new(),
            symbols: Symbols::default(),
        }
    }

    pub fn insert(&mut self, name: impl Into<String>, relation: Relation<W>) {
        self.relations.insert(name.into(), relation);
    }

    pub fn get(&self, name: &str) -> Option<&Relation<W>> {
        self.relations.get(name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Relation<W>> {
        self.relations.get_mut(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.relations.keys().map(String::as_str)
    }

    /// Convenience for tests and examples: builds a relation from integer rows.
    pub fn insert_ints(&mut self, name: &str, rows: &[(&[i64], W)]) {
        let arity = rows.first().map_or(0, |(r, _)| r.len());
        let rel = Relation::from_rows(
            arity,
            rows.iter()
                .map(|(r, w)| (r.iter().map(|&v| Value::Int(v)).collect(), w.clone())),
        );
        self.insert(name, rel);
    }

    /// Converts all weights with `f`, keeping values and symbols.
    pub fn map_weights<V: Clone>(&self, mut f: impl FnMut(&W) -> V) -> Database<V> {
        let relations = self
            .relations
            .iter()
            .map(|(name, r)| {
                let rel = Relation {
                    arity: r.arity,
                    values: r.values.clone(),
                    weights: r.weights.iter().map(&mut f).collect(),
                };
                (name.clone(), rel)
            })
            .collect();
        Database {
            relations,
            symbols: self.symbols.clone(),
        }
    }
}
