#include "compkit/arguments.hpp"
#include "compkit/build.hpp"
#include "compkit/cli.hpp"
#include "compkit/config.hpp"
#include "compkit/container.hpp"
#include "compkit/errors.hpp"
#include "compkit/harness.hpp"
#include "compkit/injection.hpp"
#include "compkit/namespace_ops.hpp"
#include "compkit/version.hpp"
#include "compkit/workflow.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace compkit;

namespace {

py::object to_python(const Scalar& s) {
    return std::visit(
        [](const auto& v) -> py::object {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Real>) {
                return py::float_(v.value);
            } else {
                return py::cast(v);
            }
        },
        s);
}

py::dict params_to_dict(const ParamMap& params) {
    py::dict out;
    for (const auto& [key, value] : params) {
        if (std::holds_alternative<std::monostate>(value)) {
            out[py::str(key)] = py::none();
        } else if (const auto* one = std::get_if<Scalar>(&value)) {
            out[py::str(key)] = to_python(*one);
        } else {
            py::list items;
            for (const auto& s : std::get<std::vector<Scalar>>(value)) {
                items.append(to_python(s));
            }
            out[py::str(key)] = items;
        }
    }
    return out;
}

EngineKind engine_arg(const std::string& text) {
    auto kind = engine_kind_from_string(text);
    if (!kind) {
        throw UsageError("unknown engine '" + text + "'");
    }
    return *kind;
}

ReportStyle style_arg(const std::string& text) {
    if (text == "human") return ReportStyle::human;
    if (text == "machine") return ReportStyle::machine;
    throw UsageError("unknown report style '" + text + "'");
}

py::dict report_to_dict(const TestReport& r) {
    py::list cases;
    for (const auto& c : r.cases) {
        py::dict d;
        d["test_name"] = c.test_name;
        d["status"] = std::string(to_string(c.status));
        d["duration_ms"] = c.duration_ms;
        d["captured_output"] = c.captured_output;
        cases.append(d);
    }
    py::dict out;
    out["component"] = r.component;
    out["engine"] = std::string(to_string(r.engine));
    out["cases"] = cases;
    out["passed"] = r.summary.passed;
    out["failed"] = r.summary.failed;
    out["errored"] = r.summary.errored;
    out["no_tests"] = r.no_tests;
    return out;
}

}  // namespace

PYBIND11_MODULE(_compkit, m) {
    m.doc() = "Bindings for the compkit component compiler";
    m.attr("__version__") = std::string(tool_version);

    auto base = py::register_exception<Error>(m, "CompkitError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<InjectError>(m, "InjectError", base.ptr());
    py::register_exception<GenerateError>(m, "GenerateError", base.ptr());

    py::class_<ComponentConfig>(m, "ComponentConfig")
        .def_readonly("name", &ComponentConfig::name)
        .def_readonly("namespace", &ComponentConfig::namespace_path)
        .def_readonly("version", &ComponentConfig::version)
        .def_readonly("description", &ComponentConfig::description)
        .def_readonly("config_path", &ComponentConfig::config_path)
        .def_readonly("warnings", &ComponentConfig::warnings)
        .def_property_readonly("argument_names",
                               [](const ComponentConfig& c) {
                                   std::vector<std::string> names;
                                   for (const auto& a : c.arguments) names.push_back(a.name);
                                   return names;
                               })
        .def_property_readonly("engines",
                               [](const ComponentConfig& c) {
                                   std::vector<std::string> kinds;
                                   for (const auto& e : c.engines) kinds.emplace_back(to_string(e.kind));
                                   return kinds;
                               })
        .def("same_definition", &ComponentConfig::same_definition)
        .def("__repr__", [](const ComponentConfig& c) {
            return "<ComponentConfig " + c.name + " " + c.version + ">";
        });

    m.def("parse_config", &parse_config, py::arg("yaml_text"),
          py::arg("source_path") = std::filesystem::path("component.comp.yaml"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("validate_config", [](const ComponentConfig& cfg) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& d : validate_config(cfg)) {
            out.emplace_back(d.severity == Severity::error ? "error" : "warning", d.message);
        }
        return out;
    });
    m.def("view_config", &view_config);
    m.def("render_help", &render_help);

    m.def("coerce", [](const std::string& type, const std::string& raw) {
        auto t = argument_type_from_string(type);
        if (!t) {
            throw UsageError("unknown argument type '" + type + "'");
        }
        return to_python(coerce(*t, raw));
    });
    m.def(
        "parse_args",
        [](const ComponentConfig& cfg, const std::vector<std::string>& argv) -> py::tuple {
            auto outcome = parse_args(cfg.arguments, argv);
            switch (outcome.kind) {
                case ParseOutcome::Kind::help: return py::make_tuple("help", py::none(), outcome.warnings);
                case ParseOutcome::Kind::version:
                    return py::make_tuple("version", py::none(), outcome.warnings);
                default: break;
            }
            return py::make_tuple("params", params_to_dict(outcome.params), outcome.warnings);
        },
        py::arg("config"), py::arg("argv"));

    m.def("inject", [](const std::string& script, const std::string& language, const std::string& block) {
        auto lang = language_from_string(language);
        if (!lang) {
            throw UsageError("unknown language '" + language + "'");
        }
        return inject(script, *lang, block);
    });

    m.def("generate_native_wrapper", &generate_native_wrapper);
    m.def("generate_containerfile", &generate_containerfile);
    m.def("generate_container_wrapper", &generate_container_wrapper);
    m.def("image_ref", [](const ComponentConfig& cfg) { return image_ref(cfg).str(); });
    m.def("generate_workflow_module",
          [](const ComponentConfig& cfg) { return generate_workflow_module(cfg).module_text; });

    m.def(
        "build",
        [](const ComponentConfig& cfg, const std::string& engine, const std::filesystem::path& out_dir) {
            auto artifact = build_component(cfg, engine_arg(engine), out_dir);
            py::dict d;
            d["engine"] = std::string(to_string(artifact.engine_kind));
            d["output_dir"] = artifact.output_dir;
            d["entry_path"] = artifact.entry_path;
            d["aux_files"] = artifact.aux_files;
            d["version"] = artifact.version;
            return d;
        },
        py::arg("config"), py::arg("engine") = "native", py::arg("out_dir"));

    m.def(
        "run_tests",
        [](const ComponentConfig& cfg, const std::string& engine) {
            TestReport report;
            {
                py::gil_scoped_release release;
                report = run_tests(cfg, engine_arg(engine));
            }
            auto d = report_to_dict(report);
            d["human"] = format_report(report, ReportStyle::human);
            d["machine"] = format_report(report, ReportStyle::machine);
            return d;
        },
        py::arg("config"), py::arg("engine") = "native");

    m.def("scan", [](const std::filesystem::path& root) {
        py::list out;
        for (const auto& e : scan(root)) {
            py::dict d;
            d["namespace"] = e.namespace_path;
            d["name"] = e.name;
            d["config_path"] = e.config_path;
            d["ok"] = e.ok();
            std::vector<std::string> errors;
            for (const auto& diag : e.diagnostics) {
                if (diag.severity == Severity::error) errors.push_back(diag.message);
            }
            d["errors"] = errors;
            out.append(d);
        }
        return out;
    });
    m.def(
        "ns_list",
        [](const std::filesystem::path& root, const std::string& style) { return ns_list(root, style_arg(style)); },
        py::arg("src_root"), py::arg("style") = "human");

    m.def("dispatch", [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
            py::gil_scoped_release release;
            code = dispatch(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    });
}
