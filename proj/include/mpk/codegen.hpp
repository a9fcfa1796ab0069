#pragma once

#include <string>

#include <json.hpp>

#include "mpk/templates.hpp"

namespace mpk {

// Java type mapping: Integer -> int, String -> String, Boolean -> boolean,
// entity bean types emit by reference (the class name). Anything else is
// UnmappableType.
std::string javaTypeName(const Store& store, ElementId attr);

bool canGet(const Store& store, ElementId attr);
bool canSet(const Store& store, ElementId attr);
std::string upperCaseInitialLetter(const std::string& name);

// Emits the JPA entity class for e (a kind of EntityBean): @Entity/@Table
// header, one private field per BeanAttribute, then the accessor blocks.
void codeEntityBean(const Store& store, ElementId e, OutputSink& sink);
// Emits @Id (when flagged), @Column, and the modifier-gated accessors.
void codeBeanAttribute(const Store& store, ElementId a, OutputSink& sink);

// Golden-comparison normalization: strips leading whitespace per line and
// collapses blank lines.
std::string normalizeJava(const std::string& text);

// Writes one .java per EntityBean in pkg into outDir plus manifest.json;
// returns the manifest.
nlohmann::ordered_json generatePackage(const Store& store, ElementId pkg,
                                       const std::string& outDir);

}  // namespace mpk
