#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssikyc/connect/errors.hpp"
#include "ssikyc/connect/wallet.hpp"
#include "ssikyc/crypto/commitment.hpp"
#include "ssikyc/crypto/hash.hpp"
#include "ssikyc/crypto/schnorr.hpp"
#include "ssikyc/crypto/transcript.hpp"
#include "ssikyc/ledger/ledger.hpp"
#include "ssikyc/sim/objects.hpp"
#include "ssikyc/sim/scenario.hpp"

namespace fs = std::filesystem;
using namespace ssikyc;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Bytes read_bytes(const std::string& path) {
  auto s = read_text(path);
  return Bytes(s.begin(), s.end());
}

void write_file(const fs::path& path, ByteView data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

void write_file(const fs::path& path, std::string_view text) { write_file(path, as_bytes(text)); }

std::string first_line(const std::string& path) {
  auto text = read_text(path);
  auto end = text.find('\n');
  return text.substr(0, end);
}

sim::Scenario load(const std::string& file, std::optional<std::uint64_t> seed) {
  auto s = sim::parse_scenario(read_text(file));
  if (seed) s.seed = *seed;
  return s;
}

// Chains, published objects, bank-held presentations, customer credentials
// and the scenario's PII terms.
void save_state(sim::Simulation& sim, const fs::path& dir) {
  fs::create_directories(dir / "objects");
  for (const auto& id : sim.scenario().ledgers) {
    auto& l = sim.ledger(id);
    write_file(dir / (id + ".chain"), ledger::dump_chain(id, l.blocks()));
    for (const auto& b : l.blocks())
      for (const auto& tx : b.txs) {
        auto obj = ledger::parse_payload(tx.kind, tx.payload);
        if (auto* s = std::get_if<anoncred::Schema>(&obj))
          write_file(dir / "objects" / (id + "-" + std::to_string(b.height) + "-schema.obj"), sim::object_file(*s));
        if (auto* d = std::get_if<anoncred::CredentialDefinition>(&obj))
          write_file(dir / "objects" / (id + "-" + std::to_string(b.height) + "-creddef.obj"), sim::object_file(*d));
      }
  }
  for (const auto& c : sim.cases()) {
    if (const auto* rec = sim.bank(c.bank).records.find(c.case_id))
      for (std::size_t i = 0; i < rec->presentations.size(); ++i)
        write_file(dir / "objects" / (c.case_id + "-vp-" + std::to_string(i) + ".obj"), rec->presentations[i]);
  }
  for (const auto& spec : sim.scenario().customers) {
    const auto& creds = sim.customer(spec.label).wallet.credentials();
    for (std::size_t i = 0; i < creds.size(); ++i)
      write_file(dir / "objects" / (spec.label + "-vc-" + std::to_string(i) + ".obj"), sim::object_file(creds[i].vc));
  }
  std::string terms;
  for (const auto& t : sim.pii_terms()) terms += t + "\n";
  write_file(dir / "pii_terms.txt", terms);
}

int cmd_run(const std::string& file, std::optional<std::uint64_t> seed, const std::string& trace_out,
            const std::string& state_dir, const std::string& summary_out) {
  sim::Scenario scenario;
  try {
    scenario = load(file, seed);
  } catch (const sim::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  sim::Simulation simulation(std::move(scenario));
  sim::RunResult result;
  try {
    result = simulation.run();
  } catch (const sim::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  }
  if (!trace_out.empty()) write_file(trace_out, simulation.trace().text());
  if (!state_dir.empty()) save_state(simulation, state_dir);
  auto summary = result.summary.dump(2) + "\n";
  if (!summary_out.empty()) write_file(summary_out, summary);
  std::cout << summary;
  if (!result.passed) {
    std::cerr << "FAILED: " << result.first_failure << "\n";
    return 1;
  }
  return 0;
}

std::vector<ledger::ChainDump> load_chains(const std::string& state_dir) {
  std::vector<ledger::ChainDump> chains;
  if (!fs::is_directory(state_dir)) throw std::runtime_error("no state directory " + state_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(state_dir))
    if (e.path().extension() == ".chain") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) chains.push_back(ledger::parse_chain_dump(read_text(f.string())));
  return chains;
}

int cmd_inspect(const std::string& state_dir, const std::string& ledger_id, std::optional<std::uint64_t> height) {
  for (const auto& chain : load_chains(state_dir)) {
    if (chain.ledger_id != ledger_id) continue;
    nlohmann::ordered_json out;
    out["ledger"] = chain.ledger_id;
    out["verified"] = ledger::verify_chain(chain.blocks);
    out["blocks"] = nlohmann::ordered_json::array();
    for (const auto& b : chain.blocks) {
      if (height && b.height != *height) continue;
      nlohmann::ordered_json jb = {{"height", b.height},
                                   {"prev_hash", to_hex(ByteView(b.prev_hash.data(), 32))},
                                   {"timestamp", b.timestamp},
                                   {"hash", to_hex(ByteView(b.hash.data(), 32))}};
      jb["txs"] = nlohmann::ordered_json::array();
      for (const auto& tx : b.txs)
        jb["txs"].push_back({{"kind", std::string(to_string(tx.kind))},
                             {"author", tx.author_did},
                             {"payload_bytes", tx.payload.size()}});
      out["blocks"].push_back(jb);
    }
    if (height && out["blocks"].empty()) {
      std::cerr << "no block at height " << *height << "\n";
      return 1;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cerr << "UnknownLedger: " << ledger_id << "\n";
  return 1;
}

int cmd_scan(const std::string& state_dir, const std::string& terms_file) {
  std::vector<std::string> terms;
  std::istringstream in(read_text(terms_file));
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) terms.push_back(line);
  auto chains = load_chains(state_dir);
  if (chains.empty()) {
    std::cerr << "no chains in " << state_dir << "\n";
    return 2;
  }
  std::size_t hits = 0;
  for (const auto& chain : chains)
    for (const auto& h : ledger::scan_terms(chain.ledger_id, chain.blocks, terms)) {
      std::cout << "FOUND\t" << h.ledger_id << "\t" << h.height << "\t" << h.term << "\n";
      ++hits;
    }
  std::cout << "scanned " << chains.size() << " chains for " << terms.size() << " terms: " << hits << " hits\n";
  return hits == 0 ? 0 : 1;
}

int cmd_wallet_export(const std::string& file, std::optional<std::uint64_t> seed, const std::string& customer,
                      const std::string& passphrase_file, const std::string& out) {
  sim::Simulation simulation(load(file, seed));
  auto result = simulation.run();
  if (!result.passed) std::cerr << "warning: scenario did not pass: " << result.first_failure << "\n";
  crypto::Rng rng(simulation.scenario().seed ^ 0x5b5b5b5bULL);
  auto backup = connect::export_wallet(simulation.customer(customer).wallet, first_line(passphrase_file), rng);
  write_file(out, backup);
  std::cout << "exported wallet of " << customer << " (" << backup.size() << " bytes) to " << out << "\n";
  return 0;
}

int cmd_wallet_import(const std::string& backup, const std::string& passphrase_file) {
  try {
    auto w = connect::import_wallet(read_bytes(backup), first_line(passphrase_file));
    nlohmann::ordered_json out = {{"owner", w.owner()},
                                  {"profile", std::string(crypto::to_string(w.profile()))},
                                  {"keys", w.keys().size()},
                                  {"link_secret", w.has_link_secret()},
                                  {"connections", w.connections().size()}};
    out["dids"] = nlohmann::ordered_json::array();
    for (const auto& d : w.dids()) out["dids"].push_back(d.did.str());
    out["credentials"] = nlohmann::ordered_json::array();
    for (const auto& c : w.credentials()) out["credentials"].push_back(c.vc.cred_def_id);
    std::cout << out.dump(2) << "\n";
    return 0;
  } catch (const connect::ConnectError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

int cmd_vectors() {
  const auto& g = crypto::GroupParams::test();
  nlohmann::ordered_json out;
  out["group"] = {{"profile", "TEST"}, {"p", g.p.get_str()}, {"q", g.q.get_str()}, {"g", g.g.get_str()},
                  {"h", g.h.get_str()}};
  auto d = crypto::sha256(std::string_view("abc"));
  out["sha256"] = {{"input", "abc"}, {"digest", to_hex(ByteView(d.data(), 32))}};

  Writer w;
  w.u32(1).str("abc").bigint(mpz_class(300));
  out["codec"] = {{"fields", "u32(1) str(\"abc\") bigint(300)"}, {"bytes", to_hex(w.data())}};

  crypto::Salt zero{};
  auto hc = crypto::hash_commit_digest("name", "Alice", zero);
  out["hash_commitment"] = {{"name", "name"}, {"value", "Alice"}, {"salt", to_hex(ByteView(zero.data(), 16))},
                            {"digest", to_hex(ByteView(hc.data(), 32))}};

  out["pedersen"] = nlohmann::ordered_json::array();
  for (int m = 0; m < 3; ++m)
    for (int r = 0; r < 3; ++r)
      out["pedersen"].push_back({{"m", m}, {"r", r}, {"C", crypto::pedersen_commit(g, m, r).value.get_str()}});

  crypto::Rng rng(1);
  auto key = crypto::keypair_from_secret(g, 3);
  auto sig = crypto::sign(g, key, as_bytes("kyc"), rng);
  out["schnorr"] = {{"sk", key.sk.get_str()}, {"pk", key.pk.get_str()},  {"message", "kyc"},
                    {"rng_seed", 1},          {"c", sig.c.get_str(16)}, {"s", sig.s.get_str()},
                    {"verifies", crypto::verify(g, key.pk, as_bytes("kyc"), sig)}};

  crypto::Transcript t("ssikyc/vectors");
  auto c = crypto::pedersen_commit(g, 4, 7);
  auto proof = crypto::prove_opening(g, c, 4, 7, t, rng);
  out["opening_proof"] = {{"transcript_domain", "ssikyc/vectors"},
                          {"m", 4},
                          {"r", 7},
                          {"C", c.value.get_str()},
                          {"T", proof.commitments.at(0).get_str()},
                          {"challenge", proof.challenge.get_str(16)},
                          {"responses", {proof.responses.at(0).get_str(), proof.responses.at(1).get_str()}},
                          {"verifies", crypto::verify_opening(g, c, proof, t)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_show(const std::string& file) {
  try {
    std::cout << sim::describe_object(read_bytes(file)).dump(2) << "\n";
    return 0;
  } catch (const CodecError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario harness for the SSI eKYC simulation"};
  app.require_subcommand(1);
  int rc = 0;

  auto* run = app.add_subcommand("run", "Run a scenario file");
  std::string scenario_file, trace_out, state_dir, summary_out;
  std::optional<std::uint64_t> seed;
  run->add_option("file", scenario_file, "Scenario file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--trace", trace_out, "Write the protocol trace here");
  run->add_option("--state-dir", state_dir, "Write chains, objects and PII terms here");
  run->add_option("--summary", summary_out, "Also write the JSON summary here");
  run->callback([&] { rc = cmd_run(scenario_file, seed, trace_out, state_dir, summary_out); });

  auto* ledger_cmd = app.add_subcommand("ledger", "Inspect saved chains");
  ledger_cmd->require_subcommand(1);
  std::string ledger_dir = "sim-state", ledger_id, terms_file;
  std::optional<std::uint64_t> height;
  auto* inspect = ledger_cmd->add_subcommand("inspect", "Print the blocks of one ledger");
  inspect->add_option("--ledger", ledger_id, "Ledger id")->required();
  inspect->add_option("--height", height, "Only this block");
  inspect->add_option("--state-dir", ledger_dir, "State directory written by run");
  inspect->callback([&] { rc = cmd_inspect(ledger_dir, ledger_id, height); });
  auto* scan = ledger_cmd->add_subcommand("scan-pii", "Byte-scan every chain for the given terms");
  scan->add_option("--terms-file", terms_file, "One term per line")->required();
  scan->add_option("--state-dir", ledger_dir, "State directory written by run");
  scan->callback([&] { rc = cmd_scan(ledger_dir, terms_file); });

  auto* wallet = app.add_subcommand("wallet", "Encrypted wallet backups");
  wallet->require_subcommand(1);
  std::string customer, passphrase_file, out_file, backup_file;
  auto* exp = wallet->add_subcommand("export", "Run a scenario and export one customer's wallet");
  exp->add_option("scenario", scenario_file, "Scenario file")->required();
  exp->add_option("--customer", customer, "Customer label")->required();
  exp->add_option("--passphrase-file", passphrase_file, "First line is the passphrase")->required();
  exp->add_option("--out", out_file, "Backup file")->required();
  exp->add_option("--seed", seed, "Override the scenario seed");
  exp->callback([&] { rc = cmd_wallet_export(scenario_file, seed, customer, passphrase_file, out_file); });
  auto* imp = wallet->add_subcommand("import", "Decrypt a backup and summarise the wallet");
  imp->add_option("backup", backup_file, "Backup file")->required();
  imp->add_option("--passphrase-file", passphrase_file, "First line is the passphrase")->required();
  imp->callback([&] { rc = cmd_wallet_import(backup_file, passphrase_file); });

  auto* crypto_cmd = app.add_subcommand("crypto", "Crypto utilities");
  crypto_cmd->require_subcommand(1);
  crypto_cmd->add_subcommand("vectors", "Print TEST-group test vectors")->callback([&] { rc = cmd_vectors(); });

  auto* anoncred_cmd = app.add_subcommand("anoncred", "Credential objects");
  anoncred_cmd->require_subcommand(1);
  std::string object_file;
  auto* show = anoncred_cmd->add_subcommand("show", "Pretty-print an object file");
  show->add_option("file", object_file, "Object file")->required();
  show->callback([&] { rc = cmd_show(object_file); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
