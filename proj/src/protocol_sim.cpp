#include "qstego/protocol_sim.hpp"

#include "qstego/errors.hpp"
#include "qstego/key_budget.hpp"
#include "qstego/secrecy_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace qstego {

namespace {

constexpr std::uint64_t kBlockLimit = std::uint64_t{1} << 62;

BigCount message_space(const StegoCodebook& book, bool otp) {
    return otp ? BigCount(BigCount(1) << otp_width(book)) : book.total();
}

double block_llr(const StegoCodebook& book, const ErrorString& e) {
    const LogProb induced = induced_string_logprob(book, e);
    if (induced.is_zero()) return -std::numeric_limits<double>::infinity();
    return induced.value - channel_string_logprob(book.channel(), e).value;
}

}  // namespace

std::uint64_t key_stream_id(std::uint64_t block) { return block; }
std::uint64_t message_stream_id(std::uint64_t block) { return kBlockLimit | block; }
std::uint64_t calibration_stream_id(std::uint64_t block) { return (kBlockLimit << 1) | block; }

ErrorString send_block(const StegoCodebook& book, const Message& m, KeyStream& key, bool otp) {
    if (!otp) return encode(book, m, key);
    const std::uint64_t width = otp_width(book);
    KeyStream pad = key;
    pad.skip(SubsetDraw::bits_for(book.max_subsets()));
    const Message c{otp_encrypt(m.index, width, pad)};
    ErrorString e = encode(book, c, key);
    key.skip(width);
    return e;
}

Message receive_block(const StegoCodebook& book, const ErrorString& e, KeyStream& key, bool otp) {
    if (!otp) return decode(book, e, key);
    const std::uint64_t width = otp_width(book);
    const Message c = decode(book, e, key);
    Message m{otp_decrypt(c.index, width, key)};
    return m;
}

double best_threshold_advantage(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("best_threshold_advantage: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double best = 0.0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
            v = a[i];
        } else {
            v = b[j];
        }
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return best;
}

SimResult run(const SimConfig& config) {
    if (config.blocks < 1) throw DomainError("simulation needs at least one block");
    const TypicalWindow window = config.full_window
                                     ? full_window(config.channel, config.n)
                                     : make_window(config.channel, config.n, config.coverage,
                                                   WindowOptions{config.allow_wide});
    return run(config, StegoCodebook::compile(config.channel, config.n, window));
}

SimResult run(const SimConfig& config, const StegoCodebook& book) {
    if (config.blocks < 1) throw DomainError("simulation needs at least one block");
    if (config.blocks >= kBlockLimit) throw DomainError("too many blocks");
    if (!(book.channel() == config.channel) || book.length() != config.n) {
        throw DomainError("codebook does not match the simulation config");
    }
    const std::uint64_t blocks = config.blocks;
    const BigCount space = message_space(book, config.otp);

    std::vector<double> llr(blocks), llr_cal(config.eve_test ? blocks : 0);
    std::vector<std::uint64_t> key_bits(blocks);
    std::vector<std::uint32_t> weights(blocks);
    std::vector<char> ok(blocks, 0);

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&](std::uint64_t begin, std::uint64_t end) {
        try {
            for (std::uint64_t b = begin; b < end; ++b) {
                KeyStream msg_rng(config.seed, message_stream_id(b));
                const Message m{uniform_below(msg_rng, space)};

                KeyStream alice(config.seed, key_stream_id(b));
                const ErrorString e = send_block(book, m, alice, config.otp);

                KeyStream bob(config.seed, key_stream_id(b));
                Message received;
                try {
                    received = receive_block(book, e, bob, config.otp);
                } catch (const DomainError&) {
                    received.index = -1;
                }
                ok[b] = received == m && alice.consumed() == bob.consumed();
                key_bits[b] = alice.consumed();
                weights[b] = e.weight();
                llr[b] = block_llr(book, e);

                if (config.eve_test) {
                    KeyStream cal(config.seed, calibration_stream_id(b));
                    llr_cal[b] = block_llr(book, sample_channel(config.channel, config.n, cal));
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    std::vector<std::thread> pool;
    const std::uint64_t chunk = (blocks + threads - 1) / threads;
    for (std::uint64_t begin = 0; begin < blocks; begin += chunk) {
        pool.emplace_back(worker, begin, std::min(blocks, begin + chunk));
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    SimResult r;
    r.blocks = blocks;
    r.message_bits = book.message_bits();
    r.tv_exact = tv_to_channel(book).tv_distance;
    r.key_bits_per_block = key_bits.front();
    CompensatedSum mean;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        r.blocks_ok += ok[b] ? 1 : 0;
        r.key_bits_used += key_bits[b];
        mean.add(llr[b]);
    }
    if (r.blocks_ok != blocks) {
        const auto bad = std::find(ok.begin(), ok.end(), 0) - ok.begin();
        throw IntegrityError("block " + std::to_string(bad) + " failed to decode on a noiseless channel (" +
                             std::to_string(blocks - r.blocks_ok) + " failures)");
    }
    r.eve_llr_mean = mean.value() / static_cast<double>(blocks);
    CompensatedSum var;
    for (double x : llr) var.add((x - r.eve_llr_mean) * (x - r.eve_llr_mean));
    r.eve_llr_variance = blocks > 1 ? var.value() / static_cast<double>(blocks - 1) : 0.0;

    if (config.eve_test) {
        const auto uncovered = std::count_if(llr_cal.begin(), llr_cal.end(), [](double x) { return std::isinf(x); });
        r.calibration_uncovered = static_cast<double>(uncovered) / static_cast<double>(blocks);
        r.eve_advantage = best_threshold_advantage(llr, llr_cal);
    }
    if (config.trace) {
        r.trace.reserve(blocks);
        for (std::uint64_t b = 0; b < blocks; ++b) r.trace.push_back({b, weights[b], llr[b], key_bits[b]});
    }
    return r;
}

}  // namespace qstego
