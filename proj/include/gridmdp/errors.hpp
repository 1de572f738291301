#pragma once

#include <stdexcept>
#include <string>

namespace gridmdp {

// Pipeline stage that raised an error. The CLI tags every failure exit
// with one of these names.
enum class Stage { Grid, Dispatch, Discretize, Attack, Mdp, Analysis };

inline const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Grid: return "grid";
        case Stage::Dispatch: return "dispatch";
        case Stage::Discretize: return "discretize";
        case Stage::Attack: return "attack";
        case Stage::Mdp: return "mdp";
        case Stage::Analysis: return "analysis";
    }
    return "unknown";
}

class StageError : public std::runtime_error {
public:
    StageError(Stage stage, std::string code, const std::string& message)
        : std::runtime_error(message), stage_(stage), code_(std::move(code)) {}

    Stage stage() const noexcept { return stage_; }
    const std::string& code() const noexcept { return code_; }

    std::string tagged_message() const {
        return std::string(stage_name(stage_)) + ": [" + code_ + "] " + what();
    }

private:
    Stage stage_;
    std::string code_;
};

// Grid document could not be parsed against the schema.
class ParseError : public StageError {
public:
    explicit ParseError(const std::string& message)
        : StageError(Stage::Grid, "parse", message) {}
};

// A bus/line id mentioned somewhere does not exist.
class ReferenceError : public StageError {
public:
    explicit ReferenceError(const std::string& message)
        : StageError(Stage::Grid, "reference", message) {}
};

// Grid invariants are violated; message lists the diagnostics.
class ValidationError : public StageError {
public:
    explicit ValidationError(const std::string& message)
        : StageError(Stage::Grid, "validation", message) {}
};

class DispatchError : public StageError {
public:
    DispatchError(std::string code, const std::string& message)
        : StageError(Stage::Dispatch, std::move(code), message) {}
};

class DiscretizeError : public StageError {
public:
    DiscretizeError(std::string code, const std::string& message)
        : StageError(Stage::Discretize, std::move(code), message) {}
};

class MdpError : public StageError {
public:
    MdpError(std::string code, const std::string& message)
        : StageError(Stage::Mdp, std::move(code), message) {}
};

class AnalysisError : public StageError {
public:
    AnalysisError(std::string code, const std::string& message)
        : StageError(Stage::Analysis, std::move(code), message) {}
};

}  // namespace gridmdp
