using System.Collections.Generic;
using System.Linq;

namespace Accounts
{
    public class ProfileService
    {
        private readonly List<Profile> items = new List<Profile>();

        public void Add(Profile profile)
        {
            items.Add(profile);
        }

        public IEnumerable<string> ActiveNames()
        {
            var names = new List<string>();
            foreach (var profile in items)
            {
                if (profile.IsActive)
                {
                    names.Add(profile.Name);
                }
            }
            return names.OrderBy(n => n);
        }

        public int CountByRole(string role)
        {
            return items.Count(p => p.Role == role);
        }
    }
}
