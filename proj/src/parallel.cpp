#include "fracext/parallel.hpp"
#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fracext {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned count) { g_threads = count; }

unsigned thread_count()
{
    unsigned t = g_threads;
    if(t == 0)
        t = std::max(1u, std::thread::hardware_concurrency());
    return t;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body)
{
    unsigned nt = std::min<std::size_t>(thread_count(), count);
    if(nt <= 1) {
        for(std::size_t i = 0; i < count; i++)
            body(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex lock;
    std::vector<std::thread> pool;
    std::size_t chunk = (count + nt - 1) / nt;
    for(unsigned t = 0; t < nt; t++) {
        std::size_t begin = t * chunk, end = std::min(count, begin + chunk);
        pool.emplace_back([&, begin, end] {
            try {
                for(std::size_t i = begin; i < end; i++)
                    body(i);
            } catch(...) {
                std::lock_guard<std::mutex> g(lock);
                if(!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    for(auto& th : pool)
        th.join();
    if(first_error)
        std::rethrow_exception(first_error);
}

}  // namespace fracext
