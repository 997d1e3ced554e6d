use std::collections::HashMap;

pub struct Inventory {
    items: HashMap<String, u32>,
}

impl Inventory {
    pub fn new() -> Self {
        Inventory { items: HashMap::new() }
    }

    pub fn add(&mut self, name: &str, qty: u32) {
        let entry = self.items.entry(name.to_string()).or_insert(0);
        *entry += qty;
    }

    pub fn remove(&mut self, name: &str, qty: u32) -> Result<(), String> {
        match self.items.get_mut(name) {
            Some(count) if *count >= qty => {
                *count -= qty;
                if *count == 0 {
                    self.items.remove(name);
                }
                Ok(())
            }
            Some(_) => Err(format!("not enough {}", name)),
            None => Err(format!("unknown item {}", name)),
        }
    }

    pub fn total(&self) -> u32 {
        self.items.values().sum()
    }
}
