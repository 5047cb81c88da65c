#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ids/core_types.hpp"
#include "ids/vm/instructions.hpp"
#include "ids/vm/plushy.hpp"

namespace ids::vm {

enum class NodeKind : std::uint8_t { Instruction, Integer, Constant, Block };

struct Node {
    NodeKind kind{};
    std::int64_t payload{};
    std::uint32_t first_child{};
    std::uint32_t child_count{};
};

// A plushy translated into nested code blocks stored in one flat arena. An
// instruction that opens n blocks is followed in its enclosing block by those
// n block nodes; each block runs until its close token or the end of the genome.
struct Program {
    std::vector<Node> nodes;
    std::vector<std::uint32_t> children;
    std::uint32_t root{};
};

namespace detail {
    inline auto ParseSequence(Plushy const& genes, std::size_t& pos, bool top_level, Program& prog) -> std::vector<std::uint32_t>
    {
        std::vector<std::uint32_t> items;
        auto add_node = [&](Node n) {
            prog.nodes.push_back(n);
            return static_cast<std::uint32_t>(prog.nodes.size() - 1);
        };
        auto add_block = [&](std::vector<std::uint32_t> const& kids) {
            Node b{NodeKind::Block, 0, static_cast<std::uint32_t>(prog.children.size()), static_cast<std::uint32_t>(kids.size())};
            prog.children.insert(prog.children.end(), kids.begin(), kids.end());
            return add_node(b);
        };
        while (pos < genes.size()) {
            auto const& g = genes[pos++];
            switch (g.kind) {
            case GeneKind::Close:
                if (!top_level) { return items; }
                break; // unmatched close at top level is ignored
            case GeneKind::Instruction: {
                items.push_back(add_node({NodeKind::Instruction, g.payload, 0, 0}));
                for (std::uint8_t b = 0; b < Info(g.GetOp()).opens; ++b) {
                    auto kids = ParseSequence(genes, pos, false, prog);
                    items.push_back(add_block(kids));
                }
                break;
            }
            case GeneKind::Integer:
                items.push_back(add_node({NodeKind::Integer, g.payload, 0, 0}));
                break;
            case GeneKind::Constant:
                items.push_back(add_node({NodeKind::Constant, g.payload, 0, 0}));
                break;
            }
        }
        return items;
    }
} // namespace detail

inline auto Translate(Plushy const& genes) -> Program
{
    Program prog;
    prog.nodes.reserve(genes.size() + 8);
    std::size_t pos = 0;
    auto top = detail::ParseSequence(genes, pos, true, prog);
    Node b{NodeKind::Block, 0, static_cast<std::uint32_t>(prog.children.size()), static_cast<std::uint32_t>(top.size())};
    prog.children.insert(prog.children.end(), top.begin(), top.end());
    prog.nodes.push_back(b);
    prog.root = static_cast<std::uint32_t>(prog.nodes.size() - 1);
    return prog;
}

struct Limits {
    std::size_t max_stack_items{500};
    std::size_t max_string_length{1000};
    std::size_t max_vector_length{1000};
};

struct VmState {
    enum class ItemKind : std::uint8_t { Code, DoTimes, DoRange, While, StringIter, VectorIter };
    struct ExecItem {
        ItemKind kind{ItemKind::Code};
        std::uint32_t node{};
        std::int64_t a{};
        std::int64_t b{};
    };

    std::vector<std::int64_t> integer_stack;
    std::vector<char> boolean_stack;
    std::vector<std::string> string_stack;
    std::vector<IntVector> int_vector_stack;
    std::vector<ExecItem> exec_stack;
    // containers being iterated by string_iterate / vector_integer_iterate
    std::vector<std::string> iter_strings;
    std::vector<IntVector> iter_vectors;
    std::string printed_output;
    std::size_t steps_used{};

    void Clear()
    {
        integer_stack.clear();
        boolean_stack.clear();
        string_stack.clear();
        int_vector_stack.clear();
        exec_stack.clear();
        iter_strings.clear();
        iter_vectors.clear();
        printed_output.clear();
        steps_used = 0;
    }
};

struct ExecutionResult {
    // absent when a designated output stack lacks a value
    std::optional<std::vector<Value>> outputs;
    std::size_t steps_used{};
    bool timed_out{};
};

// Reads outputs from the designated typed stacks. When a type appears k times
// among the outputs, the top k items supply them deepest-first, so for two
// integers the second-from-top is output 1 and the top is output 2.
inline auto ReadOutputs(VmState const& s, std::span<ValueType const> types) -> std::optional<std::vector<Value>>
{
    std::array<std::size_t, 4> need{};
    for (auto t : types) { ++need[static_cast<std::size_t>(t)]; }
    std::array<std::size_t, 4> have{s.integer_stack.size(), s.boolean_stack.size(), s.string_stack.size(), s.int_vector_stack.size()};
    for (std::size_t t = 0; t < 4; ++t) {
        if (have[t] < need[t]) { return std::nullopt; }
    }
    std::array<std::size_t, 4> seen{};
    std::vector<Value> out;
    out.reserve(types.size());
    for (auto t : types) {
        auto const ti = static_cast<std::size_t>(t);
        auto const idx = have[ti] - need[ti] + seen[ti]++;
        switch (t) {
        case ValueType::Integer: out.push_back(Int(s.integer_stack[idx])); break;
        case ValueType::Boolean: out.push_back(Bool(s.boolean_stack[idx] != 0)); break;
        case ValueType::String: out.push_back(Str(s.string_stack[idx])); break;
        case ValueType::IntVector: out.push_back(Vec(s.int_vector_stack[idx])); break;
        }
    }
    return out;
}

class Interpreter {
public:
    using Item = VmState::ExecItem;
    using Kind = VmState::ItemKind;

    explicit Interpreter(Limits limits = {})
        : limits_(limits)
    {
    }

    // Runs prog on the inputs until the exec stack empties or step_limit steps
    // have been taken. Deterministic; never throws on stack underflow.
    auto Run(Program const& prog, std::span<Value const> constants, std::span<Value const> inputs, std::size_t step_limit) -> VmState const&
    {
        s_.Clear();
        prog_ = &prog;
        constants_ = constants;
        inputs_ = inputs;
        s_.exec_stack.push_back({Kind::Code, prog.root, 0, 0});
        while (!s_.exec_stack.empty() && s_.steps_used < step_limit) {
            auto item = s_.exec_stack.back();
            s_.exec_stack.pop_back();
            ++s_.steps_used;
            Step(item);
        }
        timed_out_ = !s_.exec_stack.empty();
        return s_;
    }

    auto Execute(Program const& prog, std::span<Value const> constants, std::span<Value const> inputs,
        std::span<ValueType const> output_types, std::size_t step_limit) -> ExecutionResult
    {
        Run(prog, constants, inputs, step_limit);
        return {ReadOutputs(s_, output_types), s_.steps_used, timed_out_};
    }

    [[nodiscard]] auto State() const -> VmState const& { return s_; }

private:
    static constexpr std::int64_t kIntLimit = std::int64_t{1} << 62;

    static auto Clamp(__int128 x) -> std::int64_t
    {
        return static_cast<std::int64_t>(std::clamp<__int128>(x, -kIntLimit, kIntLimit));
    }

    template <typename T>
    auto Push(std::vector<T>& st, T v) -> void
    {
        if (st.size() < limits_.max_stack_items) { st.push_back(std::move(v)); }
    }

    template <typename T>
    static auto Pop(std::vector<T>& st) -> T
    {
        T v = std::move(st.back());
        st.pop_back();
        return v;
    }

    void PushExec(Item it)
    {
        if (s_.exec_stack.size() < limits_.max_stack_items) { s_.exec_stack.push_back(it); }
    }

    void PushString(std::string v)
    {
        if (v.size() <= limits_.max_string_length) { Push(s_.string_stack, std::move(v)); }
    }

    void PushVector(IntVector v)
    {
        if (v.size() <= limits_.max_vector_length) { Push(s_.int_vector_stack, std::move(v)); }
    }

    void PushValue(Value const& v)
    {
        switch (TypeOf(v)) {
        case ValueType::Integer: Push(s_.integer_stack, std::get<std::int64_t>(v)); break;
        case ValueType::Boolean: Push(s_.boolean_stack, static_cast<char>(std::get<bool>(v) ? 1 : 0)); break;
        case ValueType::String: PushString(std::get<std::string>(v)); break;
        case ValueType::IntVector: PushVector(std::get<IntVector>(v)); break;
        }
    }

    static auto FloorMod(std::int64_t a, std::int64_t b) -> std::int64_t
    {
        auto m = a % b;
        if (m != 0 && ((m < 0) != (b < 0))) { m += b; }
        return m;
    }

    void Step(Item const& item)
    {
        switch (item.kind) {
        case Kind::Code: StepNode(item.node); return;
        case Kind::DoTimes:
            if (item.a > 0) {
                PushExec({Kind::DoTimes, item.node, item.a - 1, 0});
                PushExec({Kind::Code, item.node, 0, 0});
            }
            return;
        case Kind::DoRange:
            Push(s_.integer_stack, item.a);
            if (item.a != item.b) {
                PushExec({Kind::DoRange, item.node, item.a < item.b ? item.a + 1 : item.a - 1, item.b});
            }
            PushExec({Kind::Code, item.node, 0, 0});
            return;
        case Kind::While:
            if (!s_.boolean_stack.empty() && Pop(s_.boolean_stack) != 0) {
                PushExec({Kind::While, item.node, 0, 0});
                PushExec({Kind::Code, item.node, 0, 0});
            }
            return;
        case Kind::StringIter: {
            auto const& str = s_.iter_strings[static_cast<std::size_t>(item.a)];
            auto const pos = static_cast<std::size_t>(item.b);
            if (pos < str.size()) {
                Push(s_.integer_stack, static_cast<std::int64_t>(static_cast<unsigned char>(str[pos])));
                PushExec({Kind::StringIter, item.node, item.a, item.b + 1});
                PushExec({Kind::Code, item.node, 0, 0});
            }
            return;
        }
        case Kind::VectorIter: {
            auto const& vec = s_.iter_vectors[static_cast<std::size_t>(item.a)];
            auto const pos = static_cast<std::size_t>(item.b);
            if (pos < vec.size()) {
                Push(s_.integer_stack, vec[pos]);
                PushExec({Kind::VectorIter, item.node, item.a, item.b + 1});
                PushExec({Kind::Code, item.node, 0, 0});
            }
            return;
        }
        }
    }

    void StepNode(std::uint32_t id)
    {
        auto const& n = prog_->nodes[id];
        switch (n.kind) {
        case NodeKind::Block:
            for (std::uint32_t k = n.child_count; k > 0; --k) {
                PushExec({Kind::Code, prog_->children[n.first_child + k - 1], 0, 0});
            }
            return;
        case NodeKind::Integer: Push(s_.integer_stack, n.payload); return;
        case NodeKind::Constant: PushValue(constants_[static_cast<std::size_t>(n.payload)]); return;
        case NodeKind::Instruction: Apply(static_cast<Op>(n.payload)); return;
        }
    }

    auto Ints(std::size_t k) const -> bool { return s_.integer_stack.size() >= k; }
    auto Bools(std::size_t k) const -> bool { return s_.boolean_stack.size() >= k; }
    auto Strs(std::size_t k) const -> bool { return s_.string_stack.size() >= k; }
    auto Vecs(std::size_t k) const -> bool { return s_.int_vector_stack.size() >= k; }
    auto Execs(std::size_t k) const -> bool { return s_.exec_stack.size() >= k; }

    template <typename F>
    void IntBinary(F f)
    {
        if (!Ints(2)) { return; }
        auto const b = Pop(s_.integer_stack);
        auto const a = Pop(s_.integer_stack);
        Push(s_.integer_stack, Clamp(f(static_cast<__int128>(a), static_cast<__int128>(b))));
    }

    template <typename F>
    void IntCompare(F f)
    {
        if (!Ints(2)) { return; }
        auto const b = Pop(s_.integer_stack);
        auto const a = Pop(s_.integer_stack);
        Push(s_.boolean_stack, static_cast<char>(f(a, b) ? 1 : 0));
    }

    template <typename F>
    void BoolBinary(F f)
    {
        if (!Bools(2)) { return; }
        auto const b = Pop(s_.boolean_stack) != 0;
        auto const a = Pop(s_.boolean_stack) != 0;
        Push(s_.boolean_stack, static_cast<char>(f(a, b) ? 1 : 0));
    }

    template <typename T>
    static void Dup(std::vector<T>& st, Interpreter& self)
    {
        if (!st.empty()) { self.Push(st, T(st.back())); }
    }

    template <typename T>
    static void Swap(std::vector<T>& st)
    {
        if (st.size() >= 2) { std::swap(st[st.size() - 1], st[st.size() - 2]); }
    }

    template <typename T>
    static void Rot(std::vector<T>& st)
    {
        // third item moves to the top
        if (st.size() >= 3) { std::rotate(st.end() - 3, st.end() - 2, st.end()); }
    }

    void Apply(Op op)
    {
        auto& is = s_.integer_stack;
        auto& bs = s_.boolean_stack;
        auto& ss = s_.string_stack;
        auto& vs = s_.int_vector_stack;
        auto& es = s_.exec_stack;
        switch (op) {
        case Op::IntegerAdd: IntBinary([](auto a, auto b) { return a + b; }); break;
        case Op::IntegerSub: IntBinary([](auto a, auto b) { return a - b; }); break;
        case Op::IntegerMult: IntBinary([](auto a, auto b) { return a * b; }); break;
        case Op::IntegerQuot:
            if (Ints(2) && is.back() != 0) {
                IntBinary([](auto a, auto b) { return a / b; });
            }
            break;
        case Op::IntegerMod:
            if (Ints(2) && is.back() != 0) {
                auto const b = Pop(is);
                auto const a = Pop(is);
                Push(is, FloorMod(a, b));
            }
            break;
        case Op::IntegerInc: if (Ints(1)) { is.back() = Clamp(static_cast<__int128>(is.back()) + 1); } break;
        case Op::IntegerDec: if (Ints(1)) { is.back() = Clamp(static_cast<__int128>(is.back()) - 1); } break;
        case Op::IntegerLt: IntCompare([](auto a, auto b) { return a < b; }); break;
        case Op::IntegerGt: IntCompare([](auto a, auto b) { return a > b; }); break;
        case Op::IntegerLte: IntCompare([](auto a, auto b) { return a <= b; }); break;
        case Op::IntegerGte: IntCompare([](auto a, auto b) { return a >= b; }); break;
        case Op::IntegerEq: IntCompare([](auto a, auto b) { return a == b; }); break;
        case Op::IntegerMin: IntBinary([](auto a, auto b) { return std::min(a, b); }); break;
        case Op::IntegerMax: IntBinary([](auto a, auto b) { return std::max(a, b); }); break;
        case Op::IntegerDup: Dup(is, *this); break;
        case Op::IntegerPop: if (Ints(1)) { is.pop_back(); } break;
        case Op::IntegerSwap: Swap(is); break;
        case Op::IntegerRot: Rot(is); break;
        case Op::IntegerFromBoolean: if (Bools(1)) { Push(is, std::int64_t{Pop(bs) != 0 ? 1 : 0}); } break;

        case Op::BooleanAnd: BoolBinary([](bool a, bool b) { return a && b; }); break;
        case Op::BooleanOr: BoolBinary([](bool a, bool b) { return a || b; }); break;
        case Op::BooleanNot: if (Bools(1)) { bs.back() = static_cast<char>(bs.back() != 0 ? 0 : 1); } break;
        case Op::BooleanXor: BoolBinary([](bool a, bool b) { return a != b; }); break;
        case Op::BooleanEq: BoolBinary([](bool a, bool b) { return a == b; }); break;
        case Op::BooleanDup: Dup(bs, *this); break;
        case Op::BooleanPop: if (Bools(1)) { bs.pop_back(); } break;
        case Op::BooleanSwap: Swap(bs); break;
        case Op::BooleanFromInteger: if (Ints(1)) { Push(bs, static_cast<char>(Pop(is) != 0 ? 1 : 0)); } break;

        case Op::ExecIf:
            if (Bools(1) && Execs(2)) {
                auto const cond = Pop(bs) != 0;
                auto const first = Pop(es);
                auto const second = Pop(es);
                es.push_back(cond ? first : second);
            }
            break;
        case Op::ExecWhen:
            if (Bools(1) && Execs(1)) {
                if (Pop(bs) == 0) { es.pop_back(); }
            }
            break;
        case Op::ExecDup: if (Execs(1)) { PushExec(es.back()); } break;
        case Op::ExecPop: if (Execs(1)) { es.pop_back(); } break;
        case Op::ExecSwap: Swap(es); break;
        case Op::ExecDoTimes:
            if (Ints(1) && Execs(1)) {
                auto const n = Pop(is);
                auto const body = Pop(es);
                if (body.kind == Kind::Code && n > 0) { PushExec({Kind::DoTimes, body.node, n, 0}); }
            }
            break;
        case Op::ExecDoCount:
            if (Ints(1) && Execs(1)) {
                auto const n = Pop(is);
                auto const body = Pop(es);
                if (body.kind == Kind::Code && n > 0) { PushExec({Kind::DoRange, body.node, 0, n - 1}); }
            }
            break;
        case Op::ExecDoRange:
            if (Ints(2) && Execs(1)) {
                auto const dest = Pop(is);
                auto const cur = Pop(is);
                auto const body = Pop(es);
                if (body.kind == Kind::Code) { PushExec({Kind::DoRange, body.node, cur, dest}); }
            }
            break;
        case Op::ExecWhile:
            if (Execs(1)) {
                auto const body = Pop(es);
                if (body.kind == Kind::Code) { PushExec({Kind::While, body.node, 0, 0}); }
            }
            break;
        case Op::ExecNoop: break;

        case Op::StringConcat:
            if (Strs(2)) {
                auto b = Pop(ss);
                auto a = Pop(ss);
                PushString(a + b);
            }
            break;
        case Op::StringLength: if (Strs(1)) { Push(is, static_cast<std::int64_t>(Pop(ss).size())); } break;
        case Op::StringFromInteger: if (Ints(1)) { PushString(std::to_string(Pop(is))); } break;
        case Op::StringFromBoolean: if (Bools(1)) { PushString(Pop(bs) != 0 ? "true" : "false"); } break;
        case Op::StringEq:
            if (Strs(2)) {
                auto b = Pop(ss);
                auto a = Pop(ss);
                Push(bs, static_cast<char>(a == b ? 1 : 0));
            }
            break;
        case Op::StringDup: Dup(ss, *this); break;
        case Op::StringPop: if (Strs(1)) { ss.pop_back(); } break;
        case Op::StringSwap: Swap(ss); break;
        case Op::StringRot: Rot(ss); break;
        case Op::StringEmpty: if (Strs(1)) { Push(bs, static_cast<char>(Pop(ss).empty() ? 1 : 0)); } break;
        case Op::StringEmptyString: PushString(std::string{}); break;
        case Op::StringReverse: if (Strs(1)) { std::reverse(ss.back().begin(), ss.back().end()); } break;
        case Op::StringFirst:
            if (Strs(1) && !ss.back().empty()) { ss.back() = ss.back().substr(0, 1); }
            break;
        case Op::StringRest: if (Strs(1) && !ss.back().empty()) { ss.back().erase(0, 1); } break;
        case Op::StringButlast: if (Strs(1) && !ss.back().empty()) { ss.back().pop_back(); } break;
        case Op::StringContains:
            if (Strs(2)) {
                auto b = Pop(ss);
                auto a = Pop(ss);
                Push(bs, static_cast<char>(a.find(b) != std::string::npos ? 1 : 0));
            }
            break;
        case Op::StringIterate:
            if (Strs(1) && Execs(1)) {
                auto str = Pop(ss);
                auto const body = Pop(es);
                if (body.kind == Kind::Code && !str.empty()) {
                    s_.iter_strings.push_back(std::move(str));
                    PushExec({Kind::StringIter, body.node, static_cast<std::int64_t>(s_.iter_strings.size() - 1), 0});
                }
            }
            break;

        case Op::VectorLength: if (Vecs(1)) { Push(is, static_cast<std::int64_t>(Pop(vs).size())); } break;
        case Op::VectorNth:
            if (Vecs(1) && Ints(1) && !vs.back().empty()) {
                auto const idx = Pop(is);
                auto v = Pop(vs);
                Push(is, v[static_cast<std::size_t>(FloorMod(idx, static_cast<std::int64_t>(v.size())))]);
            }
            break;
        case Op::VectorFirst: if (Vecs(1) && !vs.back().empty()) { Push(is, Pop(vs).front()); } break;
        case Op::VectorLast: if (Vecs(1) && !vs.back().empty()) { Push(is, Pop(vs).back()); } break;
        case Op::VectorRest: if (Vecs(1) && !vs.back().empty()) { vs.back().erase(vs.back().begin()); } break;
        case Op::VectorButlast: if (Vecs(1) && !vs.back().empty()) { vs.back().pop_back(); } break;
        case Op::VectorEmpty: if (Vecs(1)) { Push(bs, static_cast<char>(Pop(vs).empty() ? 1 : 0)); } break;
        case Op::VectorDup: Dup(vs, *this); break;
        case Op::VectorPop: if (Vecs(1)) { vs.pop_back(); } break;
        case Op::VectorSwap: Swap(vs); break;
        case Op::VectorConj:
            if (Vecs(1) && Ints(1) && vs.back().size() < limits_.max_vector_length) { vs.back().push_back(Pop(is)); }
            break;
        case Op::VectorEmptyVector: PushVector(IntVector{}); break;
        case Op::VectorIterate:
            if (Vecs(1) && Execs(1)) {
                auto v = Pop(vs);
                auto const body = Pop(es);
                if (body.kind == Kind::Code && !v.empty()) {
                    s_.iter_vectors.push_back(std::move(v));
                    PushExec({Kind::VectorIter, body.node, static_cast<std::int64_t>(s_.iter_vectors.size() - 1), 0});
                }
            }
            break;

        case Op::In1:
        case Op::In2:
        case Op::In3:
        case Op::In4:
        case Op::In5: {
            auto const k = static_cast<std::size_t>(op) - static_cast<std::size_t>(Op::In1);
            if (k < inputs_.size()) { PushValue(inputs_[k]); }
            break;
        }
        case Op::Count_: break;
        }
    }

    Limits limits_;
    VmState s_;
    Program const* prog_{};
    std::span<Value const> constants_;
    std::span<Value const> inputs_;
    bool timed_out_{};
};

} // namespace ids::vm
