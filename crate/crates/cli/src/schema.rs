//! JSON schema for experiment configs, printed by `schema`.

use serde_json::{json, Value};

use crate::catalog::{EXPERIMENTS, SETS};

fn complex() -> Value {
    json!({ "type": "array", "items": { "type": "number" }, "minItems": 2, "maxItems": 2 })
}

fn descending_list(what: &str) -> Value {
    json!({
        "type": "array",
        "items": { "type": "number", "exclusiveMinimum": 0 },
        "description": format!("{what}, positive and strictly descending")
    })
}

pub fn schema() -> Value {
    let experiments: Vec<&str> = EXPERIMENTS.iter().map(|(n, _)| *n).collect();
    let set_kinds: Vec<&str> = SETS.iter().map(|(n, _)| *n).collect();
    let bump = json!({
        "type": "object",
        "required": ["center", "radius"],
        "properties": { "center": complex(), "radius": { "type": "number", "exclusiveMinimum": 0 } },
        "additionalProperties": false
    });
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "planar-jets experiment config",
        "type": "object",
        "required": ["experiment"],
        "additionalProperties": false,
        "properties": {
            "experiment": { "enum": experiments },
            "set": {
                "type": "object",
                "required": ["kind"],
                "properties": {
                    "kind": { "enum": set_kinds },
                    "depth": { "type": "integer", "minimum": 0 },
                    "beta": { "type": "number" },
                    "maps": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["ratio", "angle", "translation"],
                            "properties": {
                                "ratio": { "type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1 },
                                "angle": { "type": "number" },
                                "translation": complex()
                            }
                        }
                    },
                    "center": complex(),
                    "radius": { "type": "number" },
                    "n": { "type": "integer", "minimum": 1 },
                    "corner": complex(),
                    "spacing": { "type": "number" },
                    "nx": { "type": "integer", "minimum": 1 },
                    "ny": { "type": "integer", "minimum": 1 },
                    "path": { "type": "string" }
                }
            },
            "grid": {
                "type": "object",
                "required": ["corner", "size", "h"],
                "additionalProperties": false,
                "properties": {
                    "corner": complex(),
                    "size": { "type": "array", "items": { "type": "integer", "minimum": 1 }, "minItems": 2, "maxItems": 2 },
                    "h": { "type": "number", "exclusiveMinimum": 0 }
                }
            },
            "functions": {
                "type": "array",
                "items": {
                    "oneOf": [
                        { "enum": planar_jets::functions::SYMBOL_IDS },
                        {
                            "type": "object",
                            "required": ["poly"],
                            "properties": {
                                "poly": {
                                    "type": "array",
                                    "items": { "type": "array", "items": { "type": "number" }, "minItems": 4, "maxItems": 4 },
                                    "description": "[p, q, re, im] terms of (re + i im) z^p conj(z)^q"
                                }
                            }
                        },
                        { "type": "object", "required": ["bump"], "properties": { "bump": bump.clone() } }
                    ]
                }
            },
            "regions": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["kind"],
                    "properties": {
                        "kind": { "enum": ["disk", "polygon", "square"] },
                        "center": complex(),
                        "radius": { "type": "number" },
                        "corner": complex(),
                        "side": { "type": "number" },
                        "vertices": { "type": "array", "items": complex() }
                    }
                }
            },
            "test_function": bump,
            "deltas": descending_list("truncation radii"),
            "scales": descending_list("pair scales"),
            "levels": { "type": "array", "items": { "type": "integer", "minimum": 0 } },
            "dbar_source": { "enum": ["exact", "finite-difference"] },
            "trials": { "type": "integer", "minimum": 0 },
            "degree": { "type": "integer", "minimum": 0 },
            "resolution": { "type": "integer", "minimum": 8 },
            "subspace": {
                "type": "object",
                "required": ["n", "basis", "values"],
                "properties": {
                    "n": { "type": "integer", "minimum": 1 },
                    "basis": { "type": "array", "items": { "type": "array", "items": complex() } },
                    "values": { "type": "array", "items": complex() }
                }
            },
            "seed": { "type": "integer", "minimum": 0 },
            "output_dir": { "type": "string" }
        }
    })
}
