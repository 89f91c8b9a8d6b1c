#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "abducto/generator/model.hpp"

namespace abducto::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the abducto tool. Results go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// The solve command with an in-memory model: prints the answer line, then
// "program: ..." when the answer came from a program, plus the step trace
// (or the channel used) when explain is set.
int answer_question(const std::string& question, const gen::GeneratorModel& model, std::ostream& out,
                    bool explain = false, std::size_t proposals = 8, std::size_t fuel = 512);

// `count` random kernel calls as line-delimited JSON records
// {"id", "op", "args": [...], "result"} with results in answer-string form;
// a call the kernel rejects carries "result": null and "error": <code name>.
std::string emit_trace(std::uint64_t seed, std::size_t count);

}  // namespace abducto::cli
