#include "f0mc/dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "f0mc/counting.hpp"
#include "f0mc/error.hpp"
#include "f0mc/parallel.hpp"
#include "f0mc/solvers.hpp"
#include "f0mc/textio.hpp"

namespace f0mc {

void BitWriter::write(std::uint64_t value, std::size_t bits) {
  for (std::size_t i = bits; i-- > 0;) {
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if ((value >> i) & 1U) bytes_.back() |= static_cast<std::uint8_t>(0x80U >> (bits_ % 8));
    ++bits_;
  }
}

void BitWriter::write(const BitString& bits) {
  for (std::size_t i = 0; i < bits.size(); ++i) write(bits.test(i) ? 1 : 0, 1);
}

void BitWriter::write(const std::vector<bool>& bits) {
  for (bool b : bits) write(b ? 1 : 0, 1);
}

bool BitReader::next() {
  if (pos_ >= bits_) fail(ErrorCode::kParse, "message ended early");
  const bool b = ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1U) != 0;
  ++pos_;
  return b;
}

std::uint64_t BitReader::read(std::size_t bits) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits; ++i) v = (v << 1) | (next() ? 1U : 0U);
  return v;
}

BitString BitReader::read_bits(std::size_t bits) {
  BitString out(bits);
  for (std::size_t i = 0; i < bits; ++i) out.set(i, next());
  return out;
}

std::vector<bool> BitReader::read_vector(std::size_t bits) {
  std::vector<bool> out(bits);
  for (std::size_t i = 0; i < bits; ++i) out[i] = next();
  return out;
}

std::size_t width_for(std::uint64_t max_value) {
  std::size_t w = 1;
  while (w < 64 && (max_value >> w) != 0) ++w;
  return w;
}

std::string_view payload_kind_name(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::kHashFunctions:
      return "hash_functions";
    case PayloadKind::kBucketingTuples:
      return "bucketing_tuples";
    case PayloadKind::kMinValues:
      return "min_values";
    case PayloadKind::kEstCells:
      return "est_cells";
  }
  return "?";
}

void CommLedger::record_send(Direction d, PayloadKind k, std::size_t bits) {
  sent_bits[static_cast<int>(d)][static_cast<int>(k)] += bits;
  ++messages[static_cast<int>(d)];
}

void CommLedger::record_receive(Direction d, PayloadKind k, std::size_t bits) {
  received_bits[static_cast<int>(d)][static_cast<int>(k)] += bits;
}

std::uint64_t CommLedger::sent(Direction d) const {
  std::uint64_t t = 0;
  for (std::uint64_t b : sent_bits[static_cast<int>(d)]) t += b;
  return t;
}

std::uint64_t CommLedger::received(Direction d) const {
  std::uint64_t t = 0;
  for (std::uint64_t b : received_bits[static_cast<int>(d)]) t += b;
  return t;
}

std::uint64_t CommLedger::kind_bits(PayloadKind k) const {
  return sent_bits[0][static_cast<int>(k)] + sent_bits[1][static_cast<int>(k)];
}

std::vector<std::pair<std::string, std::uint64_t>> CommLedger::entries() const {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  out.emplace_back("comm_bits", total_bits());
  out.emplace_back("bits_to_sites", sent(Direction::kToSite));
  out.emplace_back("bits_to_coordinator", sent(Direction::kToCoordinator));
  out.emplace_back("messages_to_sites", messages[0]);
  out.emplace_back("messages_to_coordinator", messages[1]);
  for (PayloadKind k : {PayloadKind::kHashFunctions, PayloadKind::kBucketingTuples, PayloadKind::kMinValues,
                        PayloadKind::kEstCells}) {
    out.emplace_back(std::string(payload_kind_name(k)) + "_bits", kind_bits(k));
  }
  return out;
}

std::size_t derive_g_width(std::size_t k, double delta, std::uint64_t tuples_per_site) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  const double total = static_cast<double>(k) * static_cast<double>(std::max<std::uint64_t>(tuples_per_site, 1));
  const double w = std::ceil(std::log2(2.0 * total * total / delta));
  return static_cast<std::size_t>(std::clamp(w, 1.0, static_cast<double>(BitString::kMaxBits)));
}

std::vector<BitString> merge_min_rows(const std::vector<BitString>& a, const std::vector<BitString>& b,
                                      std::size_t thresh) {
  std::vector<BitString> out = a;
  for (const BitString& v : b) insert_smallest(out, v, thresh);
  return out;
}

namespace {

// What every party knows before any message: the protocol and the shapes of
// the hash functions, so only parameter bits travel.
struct Config {
  Strategy protocol;
  std::size_t n;
  ApproxParams params;
  std::size_t g_width = 0;
  std::size_t fm_reps = 0;
  std::size_t poly_degree = 0;
};

struct HashBroadcast {
  std::vector<Hash> main;
  std::optional<Hash> g;
  std::vector<Hash> fm;
};

struct Shape {
  HashFamily family;
  std::size_t shape;
};

std::vector<Shape> broadcast_shapes(const Config& c) {
  std::vector<Shape> out;
  switch (c.protocol) {
    case Strategy::kBucketing:
      out.assign(c.params.rows, {HashFamily::kToeplitz, c.n});
      out.push_back({HashFamily::kToeplitz, c.g_width});
      break;
    case Strategy::kMinimum:
      out.assign(c.params.rows, {HashFamily::kToeplitz, 3 * c.n});
      break;
    case Strategy::kEstimation:
      out.assign(c.params.rows * c.params.thresh, {HashFamily::kPoly, c.poly_degree});
      for (std::size_t k = 0; k < c.fm_reps; ++k) out.push_back({HashFamily::kXor, c.n});
      break;
  }
  return out;
}

void encode(BitWriter& w, const HashBroadcast& b) {
  for (const Hash& h : b.main) w.write(h.parameters());
  if (b.g) w.write(b.g->parameters());
  for (const Hash& h : b.fm) w.write(h.parameters());
}

HashBroadcast decode_broadcast(BitReader& r, const Config& c) {
  HashBroadcast out;
  const auto shapes = broadcast_shapes(c);
  const std::size_t main_count = c.protocol == Strategy::kEstimation ? c.params.rows * c.params.thresh : c.params.rows;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const Shape& s = shapes[i];
    std::size_t bits = 0;
    switch (s.family) {
      case HashFamily::kToeplitz:
        bits = s.shape + c.n - 1 + s.shape;
        break;
      case HashFamily::kXor:
        bits = s.shape * c.n + s.shape;
        break;
      case HashFamily::kPoly:
        bits = (s.shape + 1) * c.n;
        break;
    }
    Hash h = Hash::from_parameters(s.family, c.n, s.shape, r.read_vector(bits));
    if (i < main_count) {
      out.main.push_back(std::move(h));
    } else if (c.protocol == Strategy::kBucketing) {
      out.g = std::move(h);
    } else {
      out.fm.push_back(std::move(h));
    }
  }
  return out;
}

struct MinReply {
  std::vector<std::vector<BitString>> rows;
};

void encode(BitWriter& w, const MinReply& m, const Config& c) {
  for (const auto& row : m.rows) {
    w.write(row.size(), width_for(c.params.thresh));
    for (const BitString& v : row) w.write(v);
  }
}

MinReply decode_min(BitReader& r, const Config& c) {
  MinReply out;
  out.rows.resize(c.params.rows);
  for (auto& row : out.rows) {
    const std::size_t count = r.read(width_for(c.params.thresh));
    for (std::size_t k = 0; k < count; ++k) row.push_back(r.read_bits(3 * c.n));
  }
  return out;
}

struct Tuple {
  BitString g;
  std::size_t zeros = 0;
};

struct BucketReply {
  std::vector<std::size_t> levels;
  std::vector<std::vector<Tuple>> rows;
};

void encode(BitWriter& w, const BucketReply& b, const Config& c) {
  for (std::size_t i = 0; i < b.rows.size(); ++i) {
    w.write(b.levels[i], width_for(c.n));
    w.write(b.rows[i].size(), width_for(c.params.thresh));
    for (const Tuple& t : b.rows[i]) {
      w.write(t.g);
      w.write(t.zeros, width_for(c.n));
    }
  }
}

BucketReply decode_bucket(BitReader& r, const Config& c) {
  BucketReply out;
  out.levels.resize(c.params.rows);
  out.rows.resize(c.params.rows);
  for (std::size_t i = 0; i < c.params.rows; ++i) {
    out.levels[i] = r.read(width_for(c.n));
    const std::size_t count = r.read(width_for(c.params.thresh));
    for (std::size_t k = 0; k < count; ++k) {
      Tuple t;
      t.g = r.read_bits(c.g_width);
      t.zeros = r.read(width_for(c.n));
      out.rows[i].push_back(std::move(t));
    }
  }
  return out;
}

struct EstReply {
  bool satisfiable = false;
  std::vector<std::uint16_t> cells;
  std::vector<std::uint16_t> fm;
};

void encode(BitWriter& w, const EstReply& e, const Config& c) {
  w.write(e.satisfiable ? 1 : 0, 1);
  if (!e.satisfiable) return;
  for (std::uint16_t v : e.cells) w.write(v, width_for(c.n));
  for (std::uint16_t v : e.fm) w.write(v, width_for(c.n));
}

EstReply decode_est(BitReader& r, const Config& c) {
  EstReply out;
  out.satisfiable = r.read(1) != 0;
  if (!out.satisfiable) return out;
  for (std::size_t k = 0; k < c.params.rows * c.params.thresh; ++k) {
    out.cells.push_back(static_cast<std::uint16_t>(r.read(width_for(c.n))));
  }
  for (std::size_t k = 0; k < c.fm_reps; ++k) out.fm.push_back(static_cast<std::uint16_t>(r.read(width_for(c.n))));
  return out;
}

struct Envelope {
  std::vector<std::uint8_t> bytes;
  std::size_t bits = 0;
};

// Moves one payload across the simulated link and returns what the receiver
// ends up holding.
template <class T, class Encode, class Decode>
T transmit(const T& payload, Direction dir, PayloadKind kind, TransportMode mode, CommLedger& ledger,
           std::mutex& ledger_mutex, Encode&& encode_fn, Decode&& decode_fn) {
  BitWriter w;
  encode_fn(w, payload);
  {
    std::lock_guard lock(ledger_mutex);
    ledger.record_send(dir, kind, w.bits());
  }
  T received;
  if (mode == TransportMode::kQueue) {
    const Envelope env{w.bytes(), w.bits()};
    BitReader r(env.bytes, env.bits);
    received = decode_fn(r);
    if (r.remaining() != 0) fail(ErrorCode::kParse, "message has trailing bits");
  } else {
    received = payload;
  }
  std::lock_guard lock(ledger_mutex);
  ledger.record_receive(dir, kind, w.bits());
  return received;
}

}  // namespace

DistResult dist_count(const std::vector<SiteInput>& sites, const ApproxParams& params, std::uint64_t seed,
                      Strategy protocol, NpOracle& oracle, const DistOptions& options) {
  if (sites.empty()) fail(ErrorCode::kInvalidArgument, "at least one site is required");
  const std::size_t n = sites.front().formula.num_vars();
  for (const SiteInput& s : sites) {
    if (s.formula.num_vars() != n) {
      fail(ErrorCode::kWidthMismatch, "site " + std::to_string(s.id) + " has " +
                                          std::to_string(s.formula.num_vars()) + " variables, expected " +
                                          std::to_string(n));
    }
  }
  const std::size_t k = sites.size();
  Config config{protocol, n, params};
  DistResult result;

  HashBroadcast broadcast;
  broadcast.main = choose_hash_functions(protocol, n, params, seed).entries;
  if (protocol == Strategy::kBucketing) {
    config.g_width = derive_g_width(k, params.delta, static_cast<std::uint64_t>(params.rows) * (params.thresh - 1));
    broadcast.g = pick_hash_functions(HashFamily::kToeplitz, n, config.g_width, 1, seed, kTupleHashStream).at(0);
    result.g_width = config.g_width;
  }
  if (protocol == Strategy::kEstimation) {
    config.poly_degree = broadcast.main.front().degree();
    if (!options.r) {
      config.fm_reps = options.fm_repetitions == 0 ? params.rows : options.fm_repetitions;
      broadcast.fm = pick_hash_functions(HashFamily::kXor, n, n, config.fm_reps, seed, kFlajoletMartinStream).entries;
    }
  }

  std::mutex ledger_mutex;
  auto encode_broadcast = [](BitWriter& w, const HashBroadcast& b) { encode(w, b); };
  auto decode_broadcast_fn = [&](BitReader& r) { return decode_broadcast(r, config); };

  // Site side: each site gets the broadcast and answers once; replies land
  // in per-site slots so the coordinator reads them in site order.
  std::vector<MinReply> min_replies(protocol == Strategy::kMinimum ? k : 0);
  std::vector<BucketReply> bucket_replies(protocol == Strategy::kBucketing ? k : 0);
  std::vector<EstReply> est_replies(protocol == Strategy::kEstimation ? k : 0);
  for_each_index(k, options.parallel, [&](std::size_t j) {
    const DnfFormula& f = sites[j].formula;
    const HashBroadcast hb = transmit(broadcast, Direction::kToSite, PayloadKind::kHashFunctions, options.transport,
                                      result.ledger, ledger_mutex, encode_broadcast, decode_broadcast_fn);
    switch (protocol) {
      case Strategy::kMinimum: {
        MinReply reply;
        for (const Hash& h : hb.main) reply.rows.push_back(find_min(f, h, params.thresh));
        min_replies[j] = transmit(
            reply, Direction::kToCoordinator, PayloadKind::kMinValues, options.transport, result.ledger, ledger_mutex,
            [&](BitWriter& w, const MinReply& m) { encode(w, m, config); },
            [&](BitReader& r) { return decode_min(r, config); });
        break;
      }
      case Strategy::kBucketing: {
        BucketReply reply;
        for (const Hash& h : hb.main) {
          LevelTrace trace;
          const BucketRow row = bucketing_row(f, h, params.thresh, SearchMode::kLinear, trace);
          reply.levels.push_back(row.level);
          std::vector<Tuple> tuples;
          for (std::size_t q = 0; q < row.cell.size(); ++q) tuples.push_back({hb.g->eval(row.cell[q]), row.zeros[q]});
          reply.rows.push_back(std::move(tuples));
        }
        bucket_replies[j] = transmit(
            reply, Direction::kToCoordinator, PayloadKind::kBucketingTuples, options.transport, result.ledger,
            ledger_mutex, [&](BitWriter& w, const BucketReply& b) { encode(w, b, config); },
            [&](BitReader& r) { return decode_bucket(r, config); });
        break;
      }
      case Strategy::kEstimation: {
        EstReply reply;
        reply.satisfiable = f.num_terms() > 0;  // every term is consistent
        if (reply.satisfiable) {
          for (const Hash& h : hb.main) reply.cells.push_back(static_cast<std::uint16_t>(find_max_range(f, h, oracle)));
          for (const Hash& h : hb.fm) reply.fm.push_back(static_cast<std::uint16_t>(*max_trailing_zeros_dnf(f, h)));
        }
        est_replies[j] = transmit(
            reply, Direction::kToCoordinator, PayloadKind::kEstCells, options.transport, result.ledger, ledger_mutex,
            [&](BitWriter& w, const EstReply& e) { encode(w, e, config); },
            [&](BitReader& r) { return decode_est(r, config); });
        break;
      }
    }
  });

  // Coordinator.
  switch (protocol) {
    case Strategy::kMinimum: {
      result.min.emplace(n, params.thresh, params.rows);
      for (const MinReply& reply : min_replies) {
        for (std::size_t i = 0; i < params.rows; ++i) {
          result.min->rows[i] = merge_min_rows(result.min->rows[i], reply.rows[i], params.thresh);
        }
      }
      result.estimate = compute_est(*result.min);
      break;
    }
    case Strategy::kBucketing: {
      std::vector<double> row_estimates;
      for (std::size_t i = 0; i < params.rows; ++i) {
        std::size_t level = 0;
        std::map<BitString, std::size_t> tuples;  // G(x) -> leading zeros of H(x)
        for (const BucketReply& reply : bucket_replies) {
          level = std::max(level, reply.levels[i]);
          for (const Tuple& t : reply.rows[i]) tuples.emplace(t.g, t.zeros);
        }
        auto cell_size = [&] {
          return static_cast<std::size_t>(std::count_if(tuples.begin(), tuples.end(),
                                                        [&](const auto& e) { return e.second >= level; }));
        };
        std::size_t size = cell_size();
        while (size >= params.thresh) {
          if (level == n) fail(ErrorCode::kPathologicalHash, "merged cell still full at level " + std::to_string(n));
          ++level;
          size = cell_size();
        }
        result.bucket_rows.emplace_back(size, level);
        row_estimates.push_back(std::ldexp(static_cast<double>(size), static_cast<int>(level)));
      }
      result.estimate = median(row_estimates);
      break;
    }
    case Strategy::kEstimation: {
      result.est.emplace(n, params.rows, params.thresh);
      std::vector<std::size_t> fm(config.fm_reps, 0);
      bool any = false;
      for (const EstReply& reply : est_replies) {
        if (!reply.satisfiable) continue;
        any = true;
        for (std::size_t c = 0; c < reply.cells.size(); ++c) {
          result.est->cells[c] = std::max(result.est->cells[c], reply.cells[c]);
        }
        for (std::size_t q = 0; q < fm.size(); ++q) fm[q] = std::max<std::size_t>(fm[q], reply.fm[q]);
      }
      if (!any) {
        result.estimate = 0.0;
        break;
      }
      std::size_t r = 0;
      if (options.r) {
        r = *options.r;
      } else {
        std::vector<double> raw(fm.begin(), fm.end());
        r = r_from_raw(static_cast<std::size_t>(median(raw)), n);
      }
      result.r = r;
      result.estimate = compute_est(*result.est, r);
      break;
    }
  }
  return result;
}

std::vector<SiteInput> split_sites(const DnfFormula& f, const std::vector<std::vector<std::size_t>>& partition) {
  std::vector<SiteInput> out;
  for (std::size_t j = 0; j < partition.size(); ++j) {
    std::vector<Term> terms;
    for (std::size_t t : partition[j]) {
      if (t >= f.num_terms()) fail(ErrorCode::kInvalidArgument, "site term index out of range");
      terms.push_back(f.term(t));
    }
    out.push_back(SiteInput{j + 1, DnfFormula(f.num_vars(), std::move(terms))});
  }
  return out;
}

Scenario parse_scenario(std::string_view text) {
  std::string dnf_text;
  std::map<std::size_t, std::pair<std::size_t, std::vector<std::size_t>>> sites;  // id -> (line, indices)
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (!line.starts_with("site")) {
      dnf_text.append(line);
      dnf_text.push_back('\n');
      continue;
    }
    dnf_text += "c\n";
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) fail(ErrorCode::kParse, where + "expected 'site <j>: <term indices>'");
    const std::string id_text(trim(line.substr(4, colon - 4)));
    std::size_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoull(id_text, &used);
      if (used != id_text.size()) throw std::invalid_argument("id");
    } catch (const std::exception&) {
      fail(ErrorCode::kParse, where + "site id must be a positive integer");
    }
    if (id == 0) fail(ErrorCode::kParse, where + "site ids start at 1");
    if (sites.count(id) != 0) fail(ErrorCode::kParse, where + "site " + std::to_string(id) + " listed twice");
    std::vector<std::size_t> indices;
    for (std::string_view tok : split_ws(line.substr(colon + 1))) {
      std::size_t v = 0;
      try {
        std::size_t used = 0;
        v = std::stoull(std::string(tok), &used);
        if (used != tok.size()) throw std::invalid_argument("index");
      } catch (const std::exception&) {
        fail(ErrorCode::kParse, where + "bad term index '" + std::string(tok) + "'");
      }
      if (v == 0) fail(ErrorCode::kParse, where + "term indices start at 1");
      indices.push_back(v - 1);
    }
    sites[id] = {line_no, std::move(indices)};
  }
  Scenario out;
  out.formula = parse_dnf(dnf_text);
  if (sites.empty()) fail(ErrorCode::kParse, "scenario lists no sites");
  std::vector<bool> covered(out.formula.num_terms(), false);
  std::size_t expected = 1;
  for (const auto& [id, entry] : sites) {
    if (id != expected) fail(ErrorCode::kParse, "site ids must be 1.." + std::to_string(sites.size()));
    ++expected;
    for (std::size_t t : entry.second) {
      if (t >= out.formula.num_terms()) {
        fail(ErrorCode::kParse, "line " + std::to_string(entry.first) + ": term index " + std::to_string(t + 1) +
                                    " beyond the formula's " + std::to_string(out.formula.num_terms()) + " terms");
      }
      covered[t] = true;
    }
    out.partition.push_back(entry.second);
  }
  for (std::size_t t = 0; t < covered.size(); ++t) {
    if (!covered[t]) fail(ErrorCode::kParse, "term " + std::to_string(t + 1) + " is not assigned to any site");
  }
  return out;
}

}  // namespace f0mc
