#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

#include "fogseal/errors.hpp"
#include "fogseal/framing.hpp"
#include "fogseal/hashcore.hpp"
#include "fogseal/netsim.hpp"
#include "fogseal/registry.hpp"
#include "fogseal/session.hpp"

namespace py = pybind11;
using namespace fogseal;

namespace {

ByteView view(const py::bytes& b) {
  char* data = nullptr;
  Py_ssize_t len = 0;
  if (PyBytes_AsStringAndSize(b.ptr(), &data, &len) != 0) throw py::error_already_set();
  return {reinterpret_cast<const std::uint8_t*>(data), static_cast<std::size_t>(len)};
}

template <typename Range>
py::bytes to_py(const Range& r) {
  return py::bytes(reinterpret_cast<const char*>(r.data()), r.size());
}

SecretKey key(const py::bytes& b) { return SecretKey(view(b)); }

CipherBlock block(const py::bytes& b) {
  const ByteView v = view(b);
  if (v.size() != kBlockSize) throw LengthError("cipher block must be 64 bytes");
  CipherBlock c;
  std::copy(v.begin(), v.end(), c.bytes.begin());
  return c;
}

}  // namespace

PYBIND11_MODULE(_fogseal, m) {
  m.doc() = "Hash-keystream encryption for IoT devices and fog nodes";

  static py::exception<Error> base(m, "FogsealError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  m.attr("BLOCK_SIZE") = kBlockSize;
  m.attr("TUPLE_SIZE") = kTupleSize;
  m.attr("MAX_PAYLOAD") = kMaxPayload;
  m.attr("DEFAULT_HASH") = std::string(kDefaultHash);

  m.def("hash_names", &hash_names);
  m.def(
      "hash32",
      [](const py::bytes& input, const std::string& hash) { return to_py(hash32(view(input), find_hash(hash))); },
      py::arg("input"), py::arg("hash") = std::string(kDefaultHash));
  m.def(
      "derive_keystream",
      [](const py::bytes& sk, std::uint64_t ctr, const std::string& hash) {
        return to_py(derive_keystream(key(sk), Counter(ctr), find_hash(hash)).bytes);
      },
      py::arg("sk"), py::arg("ctr"), py::arg("hash") = std::string(kDefaultHash));
  m.def(
      "precompute_keystream",
      [](const py::bytes& sk, std::uint64_t start, std::size_t n, const std::string& hash) {
        const auto ks = precompute_keystream(key(sk), Counter(start), n, find_hash(hash));
        py::list out;
        for (std::size_t i = 0; i < ks.size(); ++i) out.append(to_py(ks[i].bytes));
        return out;
      },
      py::arg("sk"), py::arg("start"), py::arg("n"), py::arg("hash") = std::string(kDefaultHash));

  m.def(
      "frame_message",
      [](const py::bytes& payload, const py::bytes& sk) {
        return to_py(frame_message(view(payload), key(sk)).to_bytes());
      },
      py::arg("payload"), py::arg("sk"));
  m.def(
      "deframe_message",
      [](const py::bytes& raw, const py::bytes& sk) -> py::object {
        const auto c = block(raw);
        auto p = deframe_message(PlainBlock::from_bytes(c.bytes), key(sk));
        if (!p) return py::none();
        return to_py(p->view());
      },
      py::arg("block"), py::arg("sk"));
  m.def(
      "encode_tuple",
      [](std::uint64_t id, const py::bytes& enc) { return to_py(encode_tuple(DeviceId{id}, block(enc))); },
      py::arg("id"), py::arg("enc"));
  m.def(
      "decode_tuple",
      [](const py::bytes& wire) {
        const Tuple t = decode_tuple(view(wire));
        return py::make_tuple(t.id.value, to_py(t.enc.bytes));
      },
      py::arg("wire"));

  m.def(
      "memory_footprint",
      [](std::size_t hash_state, std::size_t sk_ctr, bool dual) {
        const auto f = memory_footprint({hash_state, sk_ctr, dual});
        return py::make_tuple(f.global_bytes, f.peak_local_bytes, f.total_bytes);
      },
      py::arg("hash_state") = 107, py::arg("sk_ctr") = kHashInputSize, py::arg("dual") = false);

  py::class_<Session>(m, "Session")
      .def(py::init([](const py::bytes& sk, const std::string& mode, std::size_t window,
                       const std::string& hash) {
             return Session(key(sk), SessionOptions{parse_counter_mode(mode), window, hash});
           }),
           py::arg("sk"), py::arg("mode") = "dual", py::arg("window") = 1024,
           py::arg("hash") = std::string(kDefaultHash))
      .def("encrypt_next",
           [](Session& s, const py::bytes& payload) { return to_py(s.encrypt_next(view(payload)).bytes); })
      .def("decrypt_next",
           [](Session& s, const py::bytes& enc) -> py::object {
             auto p = s.decrypt_next(block(enc));
             if (!p) return py::none();
             return to_py(p->view());
           })
      .def("decrypt_with_resync",
           [](Session& s, const py::bytes& enc) -> py::object {
             auto r = s.decrypt_with_resync(block(enc));
             if (!r) return py::none();
             return py::make_tuple(to_py(r->payload.view()), r->skipped);
           })
      .def("peek_counters",
           [](const Session& s) {
             const auto c = s.peek_counters();
             return py::make_tuple(c.e_ctr, c.d_ctr);
           })
      .def_property_readonly("mode", [](const Session& s) { return std::string(to_string(s.mode())); })
      .def_property("resync_window", &Session::resync_window, &Session::set_resync_window);

  py::class_<Registry>(m, "Registry")
      .def(py::init<std::string>(), py::arg("hash") = std::string(kDefaultHash))
      .def(
          "register_device",
          [](Registry& r, std::uint64_t id, const py::bytes& sk, const std::string& mode,
             std::size_t window) { r.register_device(DeviceId{id}, key(sk), parse_counter_mode(mode), window); },
          py::arg("id"), py::arg("sk"), py::arg("mode") = "dual", py::arg("window") = 1024)
      .def("remove_device", [](Registry& r, std::uint64_t id) { return r.remove_device(DeviceId{id}); })
      .def("handle_tuple",
           [](Registry& r, const py::bytes& wire) {
             const TupleResult t = r.handle_tuple(view(wire));
             return py::make_tuple(std::string(to_string(t.outcome)), t.id.value, to_py(t.payload.view()),
                                   t.skipped);
           })
      .def("encrypt_for_device",
           [](Registry& r, std::uint64_t id, const py::bytes& payload) {
             return to_py(r.encrypt_for_device(DeviceId{id}, view(payload)));
           })
      .def("stale_devices",
           [](const Registry& r, std::uint64_t threshold) {
             std::vector<std::uint64_t> ids;
             for (DeviceId id : r.stale_devices(threshold)) ids.push_back(id.value);
             return ids;
           })
      .def("counters",
           [](const Registry& r, std::uint64_t id) -> py::object {
             auto s = r.status(DeviceId{id});
             if (!s) return py::none();
             return py::make_tuple(s->counters.e_ctr, s->counters.d_ctr);
           })
      .def_property_readonly("event_clock", &Registry::event_clock)
      .def("__len__", &Registry::size)
      .def("save_state",
           [](const Registry& r) {
             std::ostringstream out;
             r.save_state(out);
             return out.str();
           })
      .def_static(
          "load_state",
          [](const std::string& text, const std::string& hash) {
            std::istringstream in(text);
            return Registry::load_state(in, hash);
          },
          py::arg("text"), py::arg("hash") = std::string(kDefaultHash));

  m.def(
      "run_scenario",
      [](const std::string& json) { return netsim::report_to_json(netsim::run_scenario(netsim::parse_scenario(json))); },
      py::arg("scenario_json"));
  m.def(
      "bitflip_census",
      [](const py::bytes& sk, const py::bytes& payload, std::uint64_t ctr) {
        const auto c = netsim::bitflip_census(key(sk), view(payload), Counter(ctr));
        return std::vector<bool>(c.detected.begin(), c.detected.end());
      },
      py::arg("sk"), py::arg("payload"), py::arg("ctr"));
  m.def(
      "forgery_trial",
      [](const py::bytes& sk, std::uint64_t trials, std::size_t window, std::uint64_t seed) {
        const SecretKey k = key(sk);
        py::gil_scoped_release release;
        return netsim::forgery_trial(k, trials, window, seed);
      },
      py::arg("sk"), py::arg("trials"), py::arg("window"), py::arg("seed") = 1);
}
