#include "fleng/search.hpp"

#include "fleng/render.hpp"

#include <deque>
#include <stdexcept>
#include <utility>

namespace fleng {
namespace {

constexpr long long kIdsInitialWindow = 4;

class Driver {
 public:
  Driver(Runtime& rt, const AnswerSink& sink, const SearchProbe* probe)
      : rt_(rt), st_(rt.store()), sink_(sink), probe_(probe) {}

  SearchStatus dfs(const ValueRef& root) {
    auto m0 = st_.mark();
    try {
      dfsLoop(root);
    } catch (StepLimitExceeded&) {
      unwindTo(m0);
      return SearchStatus::StepBudget;
    }
    unwindTo(m0);
    return stopped_ ? SearchStatus::Stopped : SearchStatus::Complete;
  }

  SearchStatus bfs(const ValueRef& root) {
    auto m0 = st_.mark();
    try {
      bfsLoop(root);
    } catch (StepLimitExceeded&) {
      st_.undoTo(m0);
      return SearchStatus::StepBudget;
    }
    st_.undoTo(m0);
    return stopped_ ? SearchStatus::Stopped : SearchStatus::Complete;
  }

  SearchStatus ids(const ValueRef& root) {
    auto m0 = st_.mark();
    try {
      long long emitFrom = 0, limit = kIdsInitialWindow;
      for (;;) {
        hitLimit_ = false;
        idsWalk(root, 0, emitFrom, limit);
        if (stopped_) return SearchStatus::Stopped;
        if (!hitLimit_) return SearchStatus::Complete;
        emitFrom = limit;
        limit *= 2;
      }
    } catch (StepLimitExceeded&) {
      st_.undoTo(m0);
      return SearchStatus::StepBudget;
    }
  }

 private:
  // ---- answer emission -----------------------------------------------
  // Rendering may demand pending bindings; when that hits an undecided
  // choice, both decisions are tried, so one leaf can emit several answers.
  void emit(const ValueRef& v) {
    if (stopped_) return;
    try {
      bool more = sink_(v);
      pAnswer(v);
      if (!more) stopped_ = true;
    } catch (RenderFailure&) {
      ++rt_.stats().failures;
    } catch (RenderSplit& rs) {
      ++rt_.stats().choices;
      RawID raw = rs.node->id.raw;
      auto m = st_.mark();
      pEnter();
      st_.setDecision(raw, Decision::left());
      pResolve(raw, true);
      emit(v);
      st_.undoTo(m);
      pExit();
      if (stopped_) return;
      pEnter();
      st_.setDecision(raw, Decision::right());
      pResolve(raw, false);
      emit(v);
      st_.undoTo(m);
      pExit();
    }
  }

  // ---- probe shims ------------------------------------------------------
  void pEnter() {
    ++openScopes_;
    if (probe_ && probe_->enterScope) probe_->enterScope();
  }
  void pExit() {
    --openScopes_;
    if (probe_ && probe_->exitScope) probe_->exitScope();
  }
  void pResolve(const RawID& raw, bool left) {
    if (probe_ && probe_->resolve) probe_->resolve(raw, left);
  }
  void pAnswer(const ValueRef& v) {
    if (probe_ && probe_->answer) probe_->answer(v);
  }

  // ---- depth-first ------------------------------------------------------
  // The walk keeps its own action stack instead of recursing: left-recursive
  // programs build search paths far deeper than the native stack allows, and
  // they must end at the step budget, not in a stack overflow.
  struct Act {
    enum class K { Walk, Enter, Decide, Close } k = K::Walk;
    ValueRef v;                  // Walk: value to process; Decide: the choice node
    bool left = false;           // Decide
    DecisionStore::Mark m = 0;   // Close: undo to here, then exit the scope
  };

  void dfsLoop(const ValueRef& root) {
    std::vector<Act> stack;
    stack.push_back({Act::K::Walk, root, false, 0});
    while (!stack.empty() && !stopped_) {
      Act a = std::move(stack.back());
      stack.pop_back();
      switch (a.k) {
        case Act::K::Enter:
          pEnter();
          break;
        case Act::K::Decide:
          st_.setDecision(a.v->id.raw, a.left ? Decision::left() : Decision::right());
          pResolve(a.v->id.raw, a.left);
          break;
        case Act::K::Close:
          st_.undoTo(a.m);
          pExit();
          break;
        case Act::K::Walk:
          dfsStep(std::move(a.v), stack);
          break;
      }
    }
  }

  // Restores the store and balances the probe's scopes after an early stop
  // (answer limit or step budget) discarded the pending Close actions.
  void unwindTo(DecisionStore::Mark m0) {
    while (openScopes_ > 0) pExit();
    st_.undoTo(m0);
  }

  // One leg: enter a scope, decide, walk a value, then undo and exit.
  // Pushed in reverse because the stack runs last-pushed first.
  void pushLeg(std::vector<Act>& stack, const ValueRef& node, bool left, const ValueRef& v,
               DecisionStore::Mark m) {
    stack.push_back({Act::K::Close, nullptr, false, m});
    stack.push_back({Act::K::Walk, v, false, 0});
    stack.push_back({Act::K::Decide, node, left, 0});
    stack.push_back({Act::K::Enter, nullptr, false, 0});
  }

  // Both decisions of `node`'s identifier, left leg explored first.
  void pushBranch(std::vector<Act>& stack, const ValueRef& node, const ValueRef& leftV,
                  const ValueRef& rightV) {
    ++rt_.stats().choices;
    auto m = st_.mark();
    pushLeg(stack, node, false, rightV, m);
    pushLeg(stack, node, true, leftV, m);
  }

  void dfsStep(ValueRef value, std::vector<Act>& stack) {
    ValueRef v = rt_.nf(std::move(value));
    for (;;) {
      switch (v->kind) {
        case Value::Kind::Fail:
          ++rt_.stats().failures;
          return;
        case Value::Kind::Ctor:
          emit(v);
          return;
        case Value::Kind::Choice: {
          LookupResult lr = st_.lookupDecision(v->id.raw);
          if (lr.d.kind == DecisionKind::Left) {
            pResolve(v->id.raw, true);
            v = rt_.nf(v->left);
            continue;
          }
          if (lr.d.kind == DecisionKind::Right) {
            pResolve(v->id.raw, false);
            v = rt_.nf(v->right);
            continue;
          }
          if (lr.d.kind == DecisionKind::Lazy) {
            auto m = st_.mark();
            AddOutcome ao = st_.demand(v->id.raw, rt_);
            if (ao.k == AddOutcome::K::Conflict) {
              ++rt_.stats().failures;
              return;
            }
            if (ao.k == AddOutcome::K::Split) {
              // Decide the blocking choice, then reprocess this value.
              pushBranch(stack, ao.splitNode, v, v);
              return;
            }
            stack.push_back({Act::K::Close, nullptr, false, m});
            stack.push_back({Act::K::Walk, v, false, 0});
            stack.push_back({Act::K::Enter, nullptr, false, 0});
            return;
          }
          pushBranch(stack, v, v->left, v->right);
          return;
        }
        case Value::Kind::Guard: {
          ++rt_.stats().guards;
          AddOutcome ao = st_.addConstraints(v->constraints, rt_);
          if (ao.k == AddOutcome::K::Conflict) {
            ++rt_.stats().failures;
            return;
          }
          if (ao.k == AddOutcome::K::Split) {
            pushBranch(stack, ao.splitNode, v, v);
            return;
          }
          stack.push_back({Act::K::Close, nullptr, false, ao.mark});
          stack.push_back({Act::K::Walk, v->inner, false, 0});
          stack.push_back({Act::K::Enter, nullptr, false, 0});
          return;
        }
        default:
          throw std::logic_error("unexpected value at a search node");
      }
    }
  }

  // ---- breadth-first -----------------------------------------------------
  // A queue entry holds a value plus the store operations that rebuild its
  // path; entries are replayed from a clean mark when dequeued. Depth (and
  // thus emission order) counts decisions only: guards and demanded
  // bindings extend the path without adding depth.
  struct Op {
    enum class K { Decide, AddCs, Demand } k = K::Decide;
    RawID id;
    DecisionKind side = DecisionKind::Left;
    std::vector<Constraint> cs;
  };
  struct Node {
    ValueRef v;
    std::vector<Op> ops;
  };

  bool replay(const std::vector<Op>& ops) {
    for (const Op& op : ops) {
      switch (op.k) {
        case Op::K::Decide:
          st_.setDecision(op.id, op.side == DecisionKind::Left ? Decision::left()
                                                               : Decision::right());
          break;
        case Op::K::AddCs:
          if (st_.addConstraints(op.cs, rt_).k != AddOutcome::K::Ok) return false;
          break;
        case Op::K::Demand:
          if (st_.demand(op.id, rt_).k != AddOutcome::K::Ok) return false;
          break;
      }
    }
    return true;
  }

  void bfsLoop(const ValueRef& root) {
    std::deque<Node> q;
    q.push_back({root, {}});
    while (!q.empty() && !stopped_) {
      Node n = std::move(q.front());
      q.pop_front();
      auto m = st_.mark();
      if (!replay(n.ops)) {  // deterministic replay should not fail
        ++rt_.stats().failures;
        st_.undoTo(m);
        continue;
      }
      std::vector<Op> path = std::move(n.ops);
      ValueRef v = n.v;
      bool open = true;
      while (open) {
        v = rt_.nf(v);
        switch (v->kind) {
          case Value::Kind::Fail:
            ++rt_.stats().failures;
            open = false;
            break;
          case Value::Kind::Ctor:
            emit(v);
            open = false;
            break;
          case Value::Kind::Choice: {
            LookupResult lr = st_.lookupDecision(v->id.raw);
            if (lr.d.kind == DecisionKind::Left) {
              v = v->left;
              break;
            }
            if (lr.d.kind == DecisionKind::Right) {
              v = v->right;
              break;
            }
            if (lr.d.kind == DecisionKind::Lazy) {
              AddOutcome ao = st_.demand(v->id.raw, rt_);
              if (ao.k == AddOutcome::K::Conflict) {
                ++rt_.stats().failures;
                open = false;
                break;
              }
              if (ao.k == AddOutcome::K::Split) {
                enqueueBranch(q, v, path, ao.splitNode->id.raw);
                open = false;
                break;
              }
              path.push_back({Op::K::Demand, v->id.raw, DecisionKind::Left, {}});
              break;
            }
            enqueueBranch(q, v, path, v->id.raw);
            open = false;
            break;
          }
          case Value::Kind::Guard: {
            AddOutcome ao = st_.addConstraints(v->constraints, rt_);
            if (ao.k == AddOutcome::K::Conflict) {
              ++rt_.stats().failures;
              open = false;
              break;
            }
            if (ao.k == AddOutcome::K::Split) {
              enqueueBranch(q, v, path, ao.splitNode->id.raw);
              open = false;
              break;
            }
            ++rt_.stats().guards;
            Op op;
            op.k = Op::K::AddCs;
            op.cs.assign(v->constraints.begin(), v->constraints.end());
            path.push_back(std::move(op));
            v = v->inner;
            break;
          }
          default:
            throw std::logic_error("unexpected value at a search node");
        }
      }
      st_.undoTo(m);
    }
  }

  void enqueueBranch(std::deque<Node>& q, const ValueRef& v, const std::vector<Op>& path,
                     const RawID& raw) {
    ++rt_.stats().choices;
    for (DecisionKind side : {DecisionKind::Left, DecisionKind::Right}) {
      Node child{v, path};
      child.ops.push_back({Op::K::Decide, raw, side, {}});
      q.push_back(std::move(child));
    }
  }

  // ---- iterative deepening -------------------------------------------
  // Depth-limited depth-first rounds with doubling windows; a round emits
  // only the answers whose depth falls inside its window, so nothing is
  // reported twice.
  void idsWalk(const ValueRef& value, long long depth, long long emitFrom, long long limit) {
    if (stopped_) return;
    ValueRef v = rt_.nf(value);
    switch (v->kind) {
      case Value::Kind::Fail:
        ++rt_.stats().failures;
        return;
      case Value::Kind::Ctor:
        if (depth >= limit) {
          // Found just past the window boundary; the next round owns it.
          hitLimit_ = true;
          return;
        }
        if (depth >= emitFrom) emit(v);
        return;
      case Value::Kind::Choice: {
        LookupResult lr = st_.lookupDecision(v->id.raw);
        if (lr.d.kind == DecisionKind::Left) return idsWalk(v->left, depth, emitFrom, limit);
        if (lr.d.kind == DecisionKind::Right) return idsWalk(v->right, depth, emitFrom, limit);
        if (lr.d.kind == DecisionKind::Lazy) {
          auto m = st_.mark();
          AddOutcome ao = st_.demand(v->id.raw, rt_);
          if (ao.k == AddOutcome::K::Conflict) {
            ++rt_.stats().failures;
            return;
          }
          if (ao.k == AddOutcome::K::Split)
            return idsBranch(ao.splitNode, v, depth, emitFrom, limit);
          idsWalk(v, depth, emitFrom, limit);
          st_.undoTo(m);
          return;
        }
        idsBranch(v, v, depth, emitFrom, limit);
        return;
      }
      case Value::Kind::Guard: {
        ++rt_.stats().guards;
        AddOutcome ao = st_.addConstraints(v->constraints, rt_);
        if (ao.k == AddOutcome::K::Conflict) {
          ++rt_.stats().failures;
          return;
        }
        if (ao.k == AddOutcome::K::Split) return idsBranch(ao.splitNode, v, depth, emitFrom, limit);
        idsWalk(v->inner, depth, emitFrom, limit);
        st_.removeConstraints(ao.mark);
        return;
      }
      default:
        throw std::logic_error("unexpected value at a search node");
    }
  }

  void idsBranch(const ValueRef& node, const ValueRef& retry, long long depth, long long emitFrom,
                 long long limit) {
    if (depth >= limit) {
      hitLimit_ = true;
      return;
    }
    ++rt_.stats().choices;
    RawID raw = node->id.raw;
    bool follow = node.get() == retry.get();  // plain choice vs. blocked constraint
    auto m = st_.mark();
    st_.setDecision(raw, Decision::left());
    idsWalk(follow ? retry->left : retry, depth + 1, emitFrom, limit);
    st_.undoTo(m);
    if (stopped_) return;
    st_.setDecision(raw, Decision::right());
    idsWalk(follow ? retry->right : retry, depth + 1, emitFrom, limit);
    st_.undoTo(m);
  }

  Runtime& rt_;
  DecisionStore& st_;
  const AnswerSink& sink_;
  const SearchProbe* probe_;
  bool stopped_ = false;
  bool hitLimit_ = false;
  long long openScopes_ = 0;  // scopes entered but not yet exited (for unwindTo)
};

SearchTree collectWalk(Runtime& rt, const ValueRef& value, int depthLimit) {
  DecisionStore& st = rt.store();
  ValueRef v = rt.nf(value);
  SearchTree t;
  switch (v->kind) {
    case Value::Kind::Fail:
      t.k = SearchTree::K::Failure;
      return t;
    case Value::Kind::Ctor:
      t.k = SearchTree::K::Leaf;
      t.leaf = v;
      return t;
    case Value::Kind::Choice: {
      LookupResult lr = st.lookupDecision(v->id.raw);
      if (lr.d.kind == DecisionKind::Left) return collectWalk(rt, v->left, depthLimit);
      if (lr.d.kind == DecisionKind::Right) return collectWalk(rt, v->right, depthLimit);
      if (lr.d.kind == DecisionKind::Lazy) {
        auto m = st.mark();
        AddOutcome ao = st.demand(v->id.raw, rt);
        if (ao.k != AddOutcome::K::Ok) {
          t.k = ao.k == AddOutcome::K::Conflict ? SearchTree::K::Failure
                                                : SearchTree::K::Unexplored;
          return t;
        }
        t = collectWalk(rt, v, depthLimit);
        st.undoTo(m);
        return t;
      }
      if (depthLimit <= 0) {
        t.k = SearchTree::K::Unexplored;
        return t;
      }
      t.k = SearchTree::K::Branch;
      t.id = v->id;
      auto m = st.mark();
      st.setDecision(v->id.raw, Decision::left());
      t.left = std::make_unique<SearchTree>(collectWalk(rt, v->left, depthLimit - 1));
      st.undoTo(m);
      st.setDecision(v->id.raw, Decision::right());
      t.right = std::make_unique<SearchTree>(collectWalk(rt, v->right, depthLimit - 1));
      st.undoTo(m);
      return t;
    }
    case Value::Kind::Guard: {
      AddOutcome ao = st.addConstraints(v->constraints, rt);
      if (ao.k == AddOutcome::K::Conflict) {
        t.k = SearchTree::K::Failure;
        return t;
      }
      if (ao.k == AddOutcome::K::Split) {
        if (depthLimit <= 0) {
          t.k = SearchTree::K::Unexplored;
          return t;
        }
        t.k = SearchTree::K::Branch;
        t.id = ao.splitNode->id;
        auto m = st.mark();
        st.setDecision(ao.splitNode->id.raw, Decision::left());
        t.left = std::make_unique<SearchTree>(collectWalk(rt, v, depthLimit - 1));
        st.undoTo(m);
        st.setDecision(ao.splitNode->id.raw, Decision::right());
        t.right = std::make_unique<SearchTree>(collectWalk(rt, v, depthLimit - 1));
        st.undoTo(m);
        return t;
      }
      t = collectWalk(rt, v->inner, depthLimit);
      st.removeConstraints(ao.mark);
      return t;
    }
    default:
      throw std::logic_error("unexpected value at a search node");
  }
}

}  // namespace

SearchStatus runSearch(Runtime& rt, Strategy strat, const ValueRef& root, const AnswerSink& sink,
                       const SearchProbe* probe) {
  Driver d(rt, sink, probe);
  switch (strat) {
    case Strategy::DFS:
      return d.dfs(root);
    case Strategy::BFS:
      return d.bfs(root);
    case Strategy::IDS:
      return d.ids(root);
  }
  throw std::logic_error("bad strategy");
}

SearchTree collectTree(Runtime& rt, const ValueRef& root, int depthLimit) {
  return collectWalk(rt, root, depthLimit);
}

}  // namespace fleng
