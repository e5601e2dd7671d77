#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cqed
{

/// Calls fn(i) for i in [0, count) on up to `workers` threads. Results are written by index,
/// so the output never depends on scheduling. The first exception thrown (lowest index wins
/// among those observed) is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn && fn)
{
	std::size_t const threads = std::min<std::size_t>(count, workers < 1 ? 1 : static_cast<std::size_t>(workers));
	if (threads <= 1)
	{
		for (std::size_t i = 0; i < count; ++i)
			fn(i);
		return;
	}

	std::atomic<std::size_t> next{0};
	std::mutex error_mutex;
	std::exception_ptr error;
	std::size_t error_index = count;

	auto body = [&]() {
		for (std::size_t i = next++; i < count; i = next++)
		{
			try
			{
				fn(i);
			}
			catch (...)
			{
				std::lock_guard lock(error_mutex);
				if (i < error_index)
				{
					error_index = i;
					error = std::current_exception();
				}
			}
		}
	};

	std::vector<std::jthread> pool;
	pool.reserve(threads);
	for (std::size_t t = 0; t < threads; ++t)
		pool.emplace_back(body);
	pool.clear();
	if (error)
		std::rethrow_exception(error);
}

}  // namespace cqed
