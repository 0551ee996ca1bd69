#pragma once

// Shared test helper: compile a program plus one query, hand back the live
// runtime and the query expression's (still unevaluated) value so tests can
// force/normalize it and inspect the structure directly.

#include "fleng/engine.hpp"
#include "fleng/parser.hpp"
#include "fleng/render.hpp"
#include "fleng/transform.hpp"

#include <memory>
#include <string>
#include <vector>

namespace evaltest {

struct Eval {
  std::shared_ptr<fleng::Engine> eng;
  std::shared_ptr<fleng::QueryUnit> unit;
  std::shared_ptr<fleng::Runtime> rt;
  fleng::ValueRef value;
};

inline Eval evalExpr(const std::string& program, const std::string& query,
                     fleng::Options opts = {}) {
  Eval s;
  s.eng = std::make_shared<fleng::Engine>(fleng::Engine::fromSource(program));
  s.unit = std::make_shared<fleng::QueryUnit>(
      fleng::compileQuery(s.eng->program(), fleng::parseQuery(query)));
  s.rt = std::make_shared<fleng::Runtime>(s.eng->program(), s.unit.get(), opts);
  fleng::ValueRef root = s.rt->force(s.rt->evalRoot());
  if (root->kind != fleng::Value::Kind::Ctor)
    throw std::logic_error("query root did not evaluate to the answer wrapper");
  s.value = root->args[0];
  return s;
}

// Structural rendering of a query expression's evaluated value.
inline std::string structureOf(const std::string& program, const std::string& query) {
  Eval s = evalExpr(program, query);
  return fleng::debugStruct(*s.rt, s.value);
}

inline std::vector<std::string> answerTexts(const fleng::Engine& e, const std::string& q,
                                            fleng::QueryOptions opts = {}) {
  std::vector<std::string> out;
  for (auto& a : e.query(q, opts).answers) out.push_back(a.text);
  return out;
}

inline std::vector<std::string> answerDisplays(const fleng::Engine& e, const std::string& q,
                                               fleng::QueryOptions opts = {}) {
  std::vector<std::string> out;
  for (auto& a : e.query(q, opts).answers) out.push_back(a.display);
  return out;
}

}  // namespace evaltest
